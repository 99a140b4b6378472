//! Property suites for the Markov-category laws, determinism, causality,
//! conditionals, Kolmogorov products, duality and the interval monoid.
//!
//! Every suite is seeded and exact. A suite returns a [`SuiteReport`] with
//! the number of cases checked and a description of each failure.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::bker::{self, BKerMap, Distribution, FinBoolAlg};
use crate::error::Result;
use crate::finker::{self, FinKernel};
use crate::gen::{self, GenRng, LiftStyle};
use crate::proker::{self, Level, ProKernel};
use crate::rational::{self, ratio, Rational};
use crate::stone::{self, Clopen, InverseSystem};

const MAX_REPORTED: usize = 10;

/// Explicit levels generated beyond the compared depth, since composites
/// read their factors at higher levels.
const SLACK: usize = 3;

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    /// Extra counters worth printing, e.g. how many hypotheses held.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            cases: 0,
            failure_count: 0,
            failures: vec![],
            notes: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(msg);
        }
    }

    fn outcome<T>(&mut self, case: usize, result: Result<T>) -> Option<T> {
        match result {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("case {case}: error {e}"));
                None
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} cases, {} failures)",
            self.name, self.cases, self.failure_count
        )?;
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        for msg in &self.failures {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

/// Parameters shared by the randomized suites.
#[derive(Debug, Clone, Copy)]
pub struct LawConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_size: usize,
    pub depth: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: 0,
            cases: 200,
            max_size: 4,
            depth: 6,
        }
    }
}

fn size(rng: &mut GenRng, max: usize) -> usize {
    rng.random_range(1..=max.max(1))
}

/// Category, comonoid and semicartesian laws on random finite kernels.
pub fn finker_axioms(seed: u64, cases: usize, max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("finker axioms");
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        report.cases += 1;
        let [a, b, c, d] = [(); 4].map(|_| size(&mut rng, max_size));
        let f = gen::random_kernel(&mut rng, a, b);
        let g = gen::random_kernel(&mut rng, b, c);
        let h = gen::random_kernel(&mut rng, c, d);
        let k = gen::random_kernel(&mut rng, d, a);
        let checked = (|| -> Result<Vec<(&str, bool)>> {
            let id_a = FinKernel::identity(a);
            let id_b = FinKernel::identity(b);
            Ok(vec![
                (
                    "associativity",
                    f.then(&g)?.then(&h)? == f.then(&g.then(&h)?)?,
                ),
                ("left unit", id_a.then(&f)? == f),
                ("right unit", f.then(&id_b)? == f),
                (
                    "interchange",
                    f.tensor(&h).then(&g.tensor(&k))? == f.then(&g)?.tensor(&h.then(&k)?),
                ),
                (
                    "discard naturality",
                    f.then(&FinKernel::discard(b))? == FinKernel::discard(a),
                ),
                ("tensor unit", f.tensor(&FinKernel::identity(1)) == f),
            ])
        })();
        if let Some(results) = report.outcome(case, checked) {
            for (law, ok) in results {
                report.check(ok, || {
                    format!("case {case}: {law} fails for sizes {a},{b},{c},{d}")
                });
            }
        }
        comonoid_laws(&mut report, case, a);
    }
    report
}

fn comonoid_laws(report: &mut SuiteReport, case: usize, n: usize) {
    let copy = FinKernel::copy(n);
    let id = FinKernel::identity(n);
    let del = FinKernel::discard(n);
    let checked = (|| -> Result<Vec<(&str, bool)>> {
        Ok(vec![
            (
                "coassociativity",
                copy.then(&copy.tensor(&id))? == copy.then(&id.tensor(&copy))?,
            ),
            (
                "cocommutativity",
                copy.then(&FinKernel::swap(n, n))? == copy,
            ),
            ("right counit", copy.then(&id.tensor(&del))? == id),
            ("left counit", copy.then(&del.tensor(&id))? == id),
        ])
    })();
    if let Some(results) = report.outcome(case, checked) {
        for (law, ok) in results {
            report.check(ok, || format!("case {case}: {law} fails on size {n}"));
        }
    }
}

/// Comonoid laws for every object size `0..=max_size`.
pub fn finker_comonoid_exhaustive(max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("finker comonoid laws (all sizes)");
    for n in 0..=max_size {
        report.cases += 1;
        comonoid_laws(&mut report, n, n);
    }
    report
}

/// `is_deterministic` against the copy equation for every kernel with
/// sizes `<= max_size` and row denominators `<= max_den`.
pub fn determinism_exhaustive(max_size: usize, max_den: u32) -> SuiteReport {
    let mut report = SuiteReport::new("finker determinism (exhaustive)");
    let mut deterministic = 0usize;
    for n in 0..=max_size {
        for m in 0..=max_size {
            for k in gen::enumerate_kernels(n, m, max_den) {
                report.cases += 1;
                let det = k.is_deterministic();
                deterministic += det as usize;
                report.check(det == k.satisfies_copy_equation(), || {
                    format!("disagreement on {k:?}")
                });
            }
        }
    }
    report
        .notes
        .push(format!("{deterministic} deterministic kernels"));
    report
}

pub fn determinism_random(seed: u64, cases: usize, max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("finker determinism (random)");
    let mut rng = gen::rng(seed);
    for _ in 0..cases {
        report.cases += 1;
        let (n, m) = (size(&mut rng, max_size), size(&mut rng, max_size));
        let k = if rng.random_bool(0.3) {
            gen::random_deterministic(&mut rng, n, m)
        } else {
            gen::random_kernel(&mut rng, n, m)
        };
        report.check(k.is_deterministic() == k.satisfies_copy_equation(), || {
            format!("disagreement on {k:?}")
        });
    }
    report
}

/// Random kernel that only puts mass on columns outside `avoid`.
fn kernel_avoiding(rng: &mut GenRng, n: usize, m: usize, avoid: &BTreeSet<usize>) -> FinKernel {
    let allowed: Vec<usize> = (0..m).filter(|c| !avoid.contains(c)).collect();
    let narrow = gen::random_kernel(rng, n, allowed.len());
    narrow
        .then(&FinKernel::from_function(&allowed, m).expect("in range"))
        .expect("shapes agree")
}

/// Replaces the rows of `h` listed in `rows` by fresh random rows.
fn perturb_rows(rng: &mut GenRng, h: &FinKernel, rows: &BTreeSet<usize>) -> FinKernel {
    let fresh = gen::random_kernel(rng, h.dom(), h.cod());
    let entries = (0..h.dom())
        .flat_map(|x| {
            if rows.contains(&x) {
                fresh.row(x)
            } else {
                h.row(x)
            }
            .to_vec()
        })
        .collect();
    FinKernel::new(h.dom(), h.cod(), entries).expect("rows are stochastic")
}

/// Random causality instances plus targeted ones where `h1` and `h2`
/// differ only where `f ; g` puts no mass.
pub fn causality(seed: u64, cases: usize, targeted: usize, max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("finker causality");
    let mut rng = gen::rng(seed);
    let mut hypotheses = 0usize;
    for case in 0..cases + targeted {
        report.cases += 1;
        let [a, b, c, d] = [(); 4].map(|_| size(&mut rng, max_size));
        let f = gen::random_kernel(&mut rng, a, b);
        let (g, h1, h2) = if case < cases {
            let g = gen::random_kernel(&mut rng, b, c);
            let h1 = gen::random_kernel(&mut rng, c, d);
            let h2 = match rng.random_range(0..3) {
                0 => h1.clone(),
                1 => {
                    let rows = BTreeSet::from([rng.random_range(0..c)]);
                    perturb_rows(&mut rng, &h1, &rows)
                }
                _ => gen::random_kernel(&mut rng, c, d),
            };
            (g, h1, h2)
        } else {
            let c = c.max(2);
            let zero: BTreeSet<usize> = (0..c).filter(|_| rng.random_bool(0.5)).collect();
            let zero = if zero.len() == c {
                BTreeSet::from([0])
            } else {
                zero
            };
            let g = kernel_avoiding(&mut rng, b, c, &zero);
            let h1 = gen::random_kernel(&mut rng, c, d);
            let h2 = perturb_rows(&mut rng, &h1, &zero);
            (g, h1, h2)
        };
        if let Some(outcome) = report.outcome(case, finker::causality_instance(&f, &g, &h1, &h2)) {
            hypotheses += outcome.hypothesis as usize;
            if case >= cases {
                report.check(outcome.hypothesis, || {
                    format!("case {case}: targeted instance has a false hypothesis")
                });
            }
            report.check(outcome.holds(), || {
                format!("case {case}: counterexample f={f:?} g={g:?} h1={h1:?} h2={h2:?}")
            });
        }
    }
    report
        .notes
        .push(format!("{hypotheses} instances with a true hypothesis"));
    report
}

fn random_pk(
    rng: &mut GenRng,
    dom: &InverseSystem,
    cod: &InverseSystem,
    depth: usize,
) -> Result<ProKernel> {
    let style = if rng.random_bool(0.3) {
        LiftStyle::Deterministic
    } else {
        LiftStyle::Random
    };
    gen::random_prokernel(rng, dom, cod, depth, style)
}

/// Markov-category laws for random compatible pro-kernels, compared up to
/// `depth`.
pub fn proker_axioms(config: LawConfig) -> SuiteReport {
    let mut report = SuiteReport::new("ProDet axioms at depth");
    let mut rng = gen::rng(config.seed);
    let d = config.depth;
    for case in 0..config.cases {
        report.cases += 1;
        let checked = (|| -> Result<Vec<(&str, bool)>> {
            let [x, y, z, w] =
                [(); 4].map(|_| gen::random_system(&mut rng, d + SLACK + 1, config.max_size));
            let f = random_pk(&mut rng, &x, &y, d + SLACK)?;
            let g = random_pk(&mut rng, &y, &z, d + SLACK)?;
            let h = random_pk(&mut rng, &z, &w, d + SLACK)?;
            let id_x = ProKernel::identity(&x);
            let id_y = ProKernel::identity(&y);
            let copy = ProKernel::copy(&x);
            let del = ProKernel::discard(&x);
            let eq = |l: &ProKernel, r: &ProKernel| proker::equal_at_depth(l, r, d);
            let fg_h = f.then(&g)?.then(&h)?;
            let f_gh = f.then(&g.then(&h)?)?;
            let coassoc_l = copy.then(&copy.tensor(&id_x))?;
            let coassoc_r = copy.then(&id_x.tensor(&copy))?;
            Ok(vec![
                ("associativity", eq(&fg_h, &f_gh)?),
                ("left unit", eq(&id_x.then(&f)?, &f)?),
                ("right unit", eq(&f.then(&id_y)?, &f)?),
                ("coassociativity", eq(&coassoc_l, &coassoc_r)?),
                (
                    "cocommutativity",
                    eq(&copy.then(&ProKernel::swap(&x, &x))?, &copy)?,
                ),
                ("right counit", eq(&copy.then(&id_x.tensor(&del))?, &id_x)?),
                ("left counit", eq(&copy.then(&del.tensor(&id_x))?, &id_x)?),
                (
                    "discard naturality",
                    eq(&f.then(&ProKernel::discard(&y))?, &del)?,
                ),
                (
                    "swap involution",
                    eq(
                        &ProKernel::swap(&x, &y).then(&ProKernel::swap(&y, &x))?,
                        &ProKernel::identity(&InverseSystem::pair(&x, &y)),
                    )?,
                ),
                (
                    "interchange",
                    eq(
                        &f.tensor(&g).then(&g.tensor(&h))?,
                        &f.then(&g)?.tensor(&g.then(&h)?),
                    )?,
                ),
                ("composite compatibility", fg_h.is_compatible(d)),
                ("copy compatibility", coassoc_l.is_compatible(d)),
            ])
        })();
        if let Some(results) = report.outcome(case, checked) {
            for (law, ok) in results {
                report.check(ok, || format!("case {case}: {law} fails"));
            }
        }
    }
    report
}

/// Level-wise 0/1 test against the copy equation for random pro-kernels.
pub fn proker_determinism(config: LawConfig) -> SuiteReport {
    let mut report = SuiteReport::new("ProDet determinism at depth");
    let mut rng = gen::rng(config.seed);
    let d = config.depth;
    let mut deterministic = 0usize;
    for case in 0..config.cases {
        report.cases += 1;
        let checked = (|| -> Result<(bool, bool)> {
            let x = gen::random_system(&mut rng, d + SLACK + 1, config.max_size);
            let y = gen::random_system(&mut rng, d + SLACK, config.max_size);
            let f = random_pk(&mut rng, &x, &y, d + SLACK)?;
            Ok((
                proker::pro_is_deterministic(&f, d)?,
                proker::satisfies_copy_equation(&f, d)?,
            ))
        })();
        if let Some((det, copyable)) = report.outcome(case, checked) {
            deterministic += det as usize;
            report.check(det == copyable, || {
                format!("case {case}: 0/1 test says {det}, copy equation says {copyable}")
            });
        }
    }
    report
        .notes
        .push(format!("{deterministic} deterministic instances"));
    report
}

/// `h1` on rows whose level-0 image is outside `zone`, `h2` inside it.
fn patch(h1: &ProKernel, h2: &ProKernel, zone: BTreeSet<usize>) -> ProKernel {
    let (a, b) = (h1.clone(), h2.clone());
    let dom = h1.dom().clone();
    ProKernel::from_fn(h1.dom().clone(), h1.cod().clone(), move |j| {
        let i = a.level(j)?.dom_level.max(b.level(j)?.dom_level);
        let (ka, kb) = (a.kernel_from(i, j)?, b.kernel_from(i, j)?);
        let mut entries = Vec::with_capacity(ka.entries().len());
        for x in 0..ka.dom() {
            let inside = zone.contains(&dom.project(i, 0, x)?);
            entries.extend_from_slice(if inside { kb.row(x) } else { ka.row(x) });
        }
        Ok(Level::new(i, FinKernel::new(ka.dom(), ka.cod(), entries)?))
    })
}

/// Causality for random pro-kernels, decided at `depth`.
pub fn proker_causality(config: LawConfig) -> SuiteReport {
    let mut report = SuiteReport::new("ProDet causality at depth");
    let mut rng = gen::rng(config.seed);
    let d = config.depth;
    let mut hypotheses = 0usize;
    for case in 0..config.cases {
        report.cases += 1;
        let checked = (|| -> Result<finker::CausalityOutcome> {
            let [a, b, c, dd] =
                [(); 4].map(|_| gen::random_system(&mut rng, d + SLACK + 1, config.max_size));
            let f = gen::random_prokernel(&mut rng, &a, &b, d + SLACK, LiftStyle::Random)?;
            let c0 = c.level_size(0)?;
            let zone: BTreeSet<usize> = (0..c0).filter(|_| rng.random_bool(0.5)).collect();
            let g = gen::random_prokernel_avoiding(
                &mut rng,
                &b,
                &c,
                d + SLACK,
                LiftStyle::Random,
                &zone,
            )?;
            let h1 = gen::random_prokernel(&mut rng, &c, &dd, d + SLACK, LiftStyle::Random)?;
            let h3 = gen::random_prokernel(&mut rng, &c, &dd, d + SLACK, LiftStyle::Random)?;
            let h2 = if case % 2 == 0 {
                patch(&h1, &h3, zone)
            } else {
                h3
            };
            proker::causality_at_depth(&f, &g, &h1, &h2, d)
        })();
        if let Some(outcome) = report.outcome(case, checked) {
            hypotheses += outcome.hypothesis as usize;
            report.check(outcome.holds(), || format!("case {case}: counterexample"));
        }
    }
    report
        .notes
        .push(format!("{hypotheses} instances with a true hypothesis"));
    report
}

/// Conditionals of random states `1 -> Y x L` with `L` the binary-prefix
/// system: level independence of fiber masses, compatibility, fallback rows
/// and exact reconstruction.
pub fn conditionals(seed: u64, cases: usize, max_y: usize, depth: usize) -> SuiteReport {
    let mut report = SuiteReport::new("conditionals");
    let mut rng = gen::rng(seed);
    let l = InverseSystem::binary_prefix();
    let mut with_zero = 0usize;
    for case in 0..cases {
        report.cases += 1;
        let checked = (|| -> Result<(bool, Vec<(&str, bool)>)> {
            let y_size = size(&mut rng, max_y);
            let y = InverseSystem::constant(y_size);
            let zero: BTreeSet<usize> = if case % 2 == 0 && y_size > 1 {
                let z: BTreeSet<usize> = (0..y_size).filter(|_| rng.random_bool(0.5)).collect();
                if z.is_empty() || z.len() == y_size {
                    BTreeSet::from([0])
                } else {
                    z
                }
            } else {
                BTreeSet::new()
            };
            let joint = InverseSystem::pair(&y, &l);
            let p = gen::random_state(&mut rng, &joint, depth, &zero)?;
            let k = proker::conditional(&p, &y, &l)?;
            let masses0 = proker::fiber_masses_at(&p, &y, &l, 0)?;
            let mut independent = true;
            for j in 1..=depth {
                independent &= proker::fiber_masses_at(&p, &y, &l, j)? == masses0;
            }
            let has_zero = masses0.iter().any(|m| m.is_zero());
            let fallback = stone::least_thread(&l, 0)?;
            let mut fallback_ok = true;
            for (yi, m) in masses0.iter().enumerate() {
                if m.is_zero() {
                    for j in 0..=depth {
                        let row = k.kernel_at(j)?.row(yi).to_vec();
                        let at = fallback.at(j)?;
                        fallback_ok &= row.iter().enumerate().all(|(e, v)| {
                            *v == if e == at {
                                rational::one()
                            } else {
                                Rational::zero()
                            }
                        });
                    }
                }
            }
            let marginal = proker::first_marginal(&p, &y, &l)?;
            let rebuilt = proker::recompose(&marginal, &k)?;
            Ok((
                has_zero,
                vec![
                    ("forced zero fiber present", has_zero || zero.is_empty()),
                    ("level independence", independent),
                    ("compatibility", k.is_compatible(depth)),
                    ("fallback rows", fallback_ok),
                    (
                        "reconstruction",
                        proker::equal_at_depth(&rebuilt, &p, depth)?,
                    ),
                ],
            ))
        })();
        if let Some((has_zero, results)) = report.outcome(case, checked) {
            with_zero += has_zero as usize;
            for (law, ok) in results {
                report.check(ok, || format!("case {case}: {law} fails"));
            }
        }
    }
    report
        .notes
        .push(format!("{with_zero} instances with a zero-mass fiber"));
    report
}

/// Elements of a finite product level whose first `k` coordinates equal
/// `prefix`.
fn cylinder(sys: &InverseSystem, level: usize, prefix: &[usize]) -> Result<Clopen> {
    let mut subset = Vec::new();
    for x in 0..sys.level_size(level)? {
        if sys.coordinates(level, x)?[..prefix.len()] == *prefix {
            subset.push(x);
        }
    }
    Clopen::new(sys, level, subset)
}

fn bits(value: usize, len: usize) -> Vec<usize> {
    (0..len).map(|i| (value >> (len - 1 - i)) & 1).collect()
}

/// Marginals and cylinder measures of finite and countable products.
pub fn kolmogorov(depth: usize) -> SuiteReport {
    let mut report = SuiteReport::new("kolmogorov products");
    let checked = (|| -> Result<Vec<(String, bool)>> {
        let mut out = Vec::new();
        let c2 = InverseSystem::constant(2);
        let c3 = InverseSystem::constant(3);

        let finite =
            InverseSystem::product([InverseSystem::binary_prefix(), c3.clone(), c2.clone()]);
        for a in 0..3 {
            let m = proker::marginal_projection(&finite, a)?;
            out.push((
                format!("finite marginal {a} deterministic"),
                proker::pro_is_deterministic(&m, depth)?,
            ));
        }
        let countable = InverseSystem::countable_product(vec![c2.clone(), c3.clone()])?;
        for a in 0..=depth {
            let m = proker::marginal_projection(&countable, a)?;
            out.push((
                format!("countable marginal {a} deterministic"),
                proker::pro_is_deterministic(&m, depth)?,
            ));
        }

        // eight coins with distinct biases
        let coins: Vec<ProKernel> = (0..8)
            .map(|a| ProKernel::coin(ratio(a + 1, 10)))
            .collect::<Result<_>>()?;
        let product = proker::tensor_states(&coins)?;
        for (a, coin) in coins.iter().enumerate() {
            let m = product.then(&proker::marginal_projection(product.cod(), a)?)?;
            out.push((
                format!("finite product marginal {a}"),
                proker::equal_at_depth(&m, coin, depth)?,
            ));
        }
        // factors on finite sets keep the diagonal levels small
        let die = ProKernel::state(c3.clone(), |_| {
            Ok(vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)])
        });
        let family = vec![
            ProKernel::coin(ratio(1, 2))?,
            ProKernel::coin(ratio(2, 3))?,
            die,
        ];
        let infinite = proker::infinite_tensor_states(&family)?;
        for a in 0..=depth {
            let m = infinite.then(&proker::marginal_projection(infinite.cod(), a)?)?;
            out.push((
                format!("countable product marginal {a}"),
                proker::equal_at_depth(&m, &family[a % family.len()], depth)?,
            ));
        }

        let fair = vec![ProKernel::coin(ratio(1, 2))?; 8];
        let fair8 = proker::tensor_states(&fair)?;
        let fair_stream = proker::infinite_tensor_states(&fair[..1])?;
        let bits_stream = ProKernel::coin_stream(ratio(1, 2))?;
        let mut all_cylinders = true;
        for k in 0..=8usize {
            let expected = ratio(1, 1 << k);
            for prefix in 0..1usize << k {
                let p = bits(prefix, k);
                let c = cylinder(fair8.cod(), 0, &p)?;
                all_cylinders &= proker::clopen_measure(&fair8, &c)? == expected;
                let level = k.saturating_sub(1);
                let c = cylinder(fair_stream.cod(), level, &p)?;
                all_cylinders &= proker::clopen_measure(&fair_stream, &c)? == expected;
                let c = Clopen::new(bits_stream.cod(), k, [prefix])?;
                all_cylinders &= proker::clopen_measure(&bits_stream, &c)? == expected;
            }
        }
        out.push(("fair cylinders 2^-k".into(), all_cylinders));

        let biased = vec![ProKernel::coin(ratio(2, 3))?; 2];
        let pair = proker::tensor_states(&biased)?;
        let c = cylinder(pair.cod(), 0, &[0, 1])?;
        out.push((
            "biased (0,1) cylinder 2/9".into(),
            proker::clopen_measure(&pair, &c)? == ratio(2, 9),
        ));
        let stream = proker::infinite_tensor_states(&biased[..1])?;
        let c = cylinder(stream.cod(), 1, &[0, 1])?;
        out.push((
            "biased countable (0,1) cylinder 2/9".into(),
            proker::clopen_measure(&stream, &c)? == ratio(2, 9),
        ));
        Ok(out)
    })();
    if let Some(results) = report.outcome(0, checked) {
        for (what, ok) in results {
            report.cases += 1;
            report.check(ok, || format!("{what} fails"));
        }
    }
    report
}

/// Finite additivity and refinement invariance of clopen measures.
pub fn clopen_additivity(config: LawConfig) -> SuiteReport {
    let mut report = SuiteReport::new("clopen measure additivity");
    let mut rng = gen::rng(config.seed);
    let d = config.depth;
    for case in 0..config.cases {
        report.cases += 1;
        let checked = (|| -> Result<(bool, bool)> {
            let sys = gen::random_system(&mut rng, d, config.max_size);
            let state = gen::random_state(&mut rng, &sys, d, &BTreeSet::new())?;
            let random_clopen = |rng: &mut GenRng| -> Result<Clopen> {
                let level = rng.random_range(0..=d);
                let n = sys.level_size(level)?;
                Clopen::new(&sys, level, (0..n).filter(|_| rng.random_bool(0.5)))
            };
            let a = random_clopen(&mut rng)?;
            let b = random_clopen(&mut rng)?;
            let m = |c: &Clopen| proker::clopen_measure(&state, c);
            let additive = m(&a.union(&b)?)? + m(&a.intersection(&b)?)? == m(&a)? + m(&b)?;
            let refined = m(&a.refine(d)?)? == m(&a)?;
            Ok((additive, refined))
        })();
        if let Some((additive, refined)) = report.outcome(case, checked) {
            report.check(additive, || format!("case {case}: additivity fails"));
            report.check(refined, || {
                format!("case {case}: refinement changes the measure")
            });
        }
    }
    report
}

/// Round trips and structure transport between finite and Boolean kernels.
pub fn duality_random(seed: u64, cases: usize, max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("duality (random)");
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        report.cases += 1;
        let [a, b, c] = [(); 3].map(|_| size(&mut rng, max_size));
        let f = gen::random_kernel(&mut rng, a, b);
        let g = gen::random_kernel(&mut rng, b, c);
        let bf = bker::bker_from_finkernel(&f);
        let bg = bker::bker_from_finkernel(&g);
        let checked = (|| -> Result<Vec<(&str, bool)>> {
            let mut out = vec![
                ("round trip", bker::to_finkernel(&bf)? == f),
                (
                    "composition",
                    bker::bker_from_finkernel(&f.then(&g)?) == bf.then(&bg)?,
                ),
                (
                    "tensor",
                    bker::bker_from_finkernel(&f.tensor(&g)) == bf.tensor(&bg),
                ),
            ];
            if b <= 4 {
                let table = bf.assignment();
                out.push((
                    "reverse round trip",
                    BKerMap::from_assignment(bf.source(), bf.target(), &table)? == bf,
                ));
            }
            Ok(out)
        })();
        if let Some(results) = report.outcome(case, checked) {
            for (law, ok) in results {
                report.check(ok, || format!("case {case}: {law} fails"));
            }
        }
    }
    report
}

/// Copy and discard transport to cocopy and codiscard for sizes up to
/// `max_size`.
pub fn duality_structure(max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("duality (structure)");
    for n in 0..=max_size {
        report.cases += 1;
        let alg = FinBoolAlg::new(n);
        report.check(
            bker::bker_from_finkernel(&FinKernel::copy(n)) == bker::cocopy(alg),
            || format!("copy({n}) does not transport to cocopy"),
        );
        report.check(
            bker::bker_from_finkernel(&FinKernel::discard(n)) == bker::codiscard(alg),
            || format!("discard({n}) does not transport to codiscard"),
        );
        report.check(
            bker::to_finkernel(&bker::cocopy(alg)).ok() == Some(FinKernel::copy(n)),
            || format!("cocopy({n}) does not transport back"),
        );
    }
    report
}

/// Boolean determinism, finite determinism and the cocopy equation agree on
/// every small kernel.
pub fn duality_determinism_exhaustive(max_size: usize, max_den: u32) -> SuiteReport {
    let mut report = SuiteReport::new("duality determinism (exhaustive)");
    for n in 0..=max_size {
        for m in 0..=max_size {
            for k in gen::enumerate_kernels(n, m, max_den) {
                report.cases += 1;
                let b = bker::bker_from_finkernel(&k);
                let det = k.is_deterministic();
                report.check(
                    bker::is_deterministic_bker(&b) == det
                        && bker::satisfies_cocopy_equation(&b) == det,
                    || format!("disagreement on {k:?}"),
                );
            }
        }
    }
    report
}

fn random_distribution(rng: &mut GenRng, n: usize) -> Distribution {
    Distribution::new(gen::random_row(rng, n)).expect("random rows are distributions")
}

/// Associativity and unit laws of the interval monoid along matched maps.
pub fn i_monoid(seed: u64, cases: usize, max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("interval monoid");
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        report.cases += 1;
        let [a, b, c] = [(); 3].map(|_| size(&mut rng, max_size));
        let (n1, n) = (size(&mut rng, 4), size(&mut rng, 4));
        let phi = random_distribution(&mut rng, a);
        let psi = random_distribution(&mut rng, b);
        let chi = random_distribution(&mut rng, c);
        let f = gen::random_function(&mut rng, a * b, n1);
        let g = gen::random_function(&mut rng, n1 * c, n);
        // h embeds b x c into n2 injectively; k is forced on the image
        let n2 = b * c + rng.random_range(0..=2);
        let mut slots: Vec<usize> = (0..n2).collect();
        rand::seq::SliceRandom::shuffle(&mut slots[..], &mut rng);
        let h: Vec<usize> = slots[..b * c].to_vec();
        let mut k = gen::random_function(&mut rng, a * n2, n);
        for i in 0..a {
            for j in 0..b {
                for l in 0..c {
                    k[i * n2 + h[j * c + l]] = g[f[i * b + j] * c + l];
                }
            }
        }
        let checked = (|| -> Result<Vec<(&str, bool)>> {
            let left = bker::i_mult(&g, n, &bker::i_mult(&f, n1, &phi, &psi)?, &chi)?;
            let right = bker::i_mult(&k, n, &phi, &bker::i_mult(&h, n2, &psi, &chi)?)?;
            let unit = Distribution::unit();
            let fa = gen::random_function(&mut rng, a, n);
            Ok(vec![
                ("associativity", left == right),
                (
                    "right unit",
                    bker::i_mult(&fa, n, &phi, &unit)? == bker::i_action(&fa, n, &phi)?,
                ),
                (
                    "left unit",
                    bker::i_mult(&fa, n, &unit, &phi)? == bker::i_action(&fa, n, &phi)?,
                ),
            ])
        })();
        if let Some(results) = report.outcome(case, checked) {
            for (law, ok) in results {
                report.check(ok, || format!("case {case}: {law} fails"));
            }
        }
    }
    report
}

/// `I_action` respects composition of maps.
pub fn i_functoriality(seed: u64, cases: usize, max_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("interval functor");
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        report.cases += 1;
        let [a, b, c] = [(); 3].map(|_| size(&mut rng, max_size));
        let phi = random_distribution(&mut rng, a);
        let f = gen::random_function(&mut rng, a, b);
        let g = gen::random_function(&mut rng, b, c);
        let gf: Vec<usize> = f.iter().map(|&y| g[y]).collect();
        let checked = (|| -> Result<bool> {
            Ok(bker::i_action(&gf, c, &phi)?
                == bker::i_action(&g, c, &bker::i_action(&f, b, &phi)?)?)
        })();
        if let Some(ok) = report.outcome(case, checked) {
            report.check(ok, || format!("case {case}: functoriality fails"));
        }
    }
    report
}

/// For each depth `d` in the range, every prefix length `n < d` has two bit
/// vectors agreeing on the prefix with different bias values.
pub fn bernoulli_witness(min_depth: usize, max_depth: usize) -> SuiteReport {
    let mut report = SuiteReport::new("bernoulli witness");
    for d in min_depth..=max_depth {
        let table = bker::bernoulli_bias_table(d);
        report.cases += 1;
        report.check(
            bker::depends_on_coordinate(&table, d, d - 1).unwrap_or(false),
            || format!("depth {d}: last coordinate is ignored"),
        );
        for n in 0..d {
            report.cases += 1;
            let found = bker::bias_witness(&table, d, n);
            let ok =
                found.is_some_and(|(x, y)| x >> (d - n) == y >> (d - n) && table[x] != table[y]);
            report.check(ok, || format!("depth {d}, prefix {n}: no witness"));
        }
    }
    report
}

/// Every suite with the given parameters, in a fixed order.
pub fn run_all(config: LawConfig) -> Vec<SuiteReport> {
    let s = config.seed;
    let m = config.max_size;
    vec![
        finker_axioms(s, config.cases, m),
        finker_comonoid_exhaustive(5),
        determinism_exhaustive(m.min(3), 4),
        determinism_random(s, config.cases, m),
        causality(s, config.cases, config.cases / 2, m),
        proker_axioms(config),
        proker_determinism(config),
        proker_causality(config),
        conditionals(s, config.cases, 3, config.depth),
        kolmogorov(config.depth),
        clopen_additivity(config),
        duality_random(s, config.cases, m),
        duality_structure(5),
        duality_determinism_exhaustive(m.min(3), 4),
        i_monoid(s, config.cases, m),
        i_functoriality(s, config.cases, m),
        bernoulli_witness(2, 12),
    ]
}
