//! Morphisms between inverse systems: compatible families of finite kernels.
//!
//! A [`ProKernel`] `X -> Y` gives, for every codomain level `j`, a domain
//! level `i(j)` and a finite kernel `X_{i(j)} -> Y_j`. Consecutive levels must
//! agree after projecting:
//!
//! ```text
//! k_{j+1} ; proj^Y_{j+1 -> j}  =  proj^X_{i(j+1) -> i(j)} ; k_j
//! ```
//!
//! Level kernels are produced lazily and memoized. Two pro-kernels are only
//! ever compared up to a finite depth, see [`equal_at_depth`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::finker::{self, CausalityOutcome, FinKernel};
use crate::rational::{self, Rational};
use crate::stone::{self, Clopen, InverseSystem, Point};

/// Level data of a pro-kernel at one codomain level.
#[derive(Debug, Clone)]
pub struct Level {
    /// The domain level the kernel reads from.
    pub dom_level: usize,
    pub kernel: Arc<FinKernel>,
}

impl Level {
    pub fn new(dom_level: usize, kernel: FinKernel) -> Self {
        Level {
            dom_level,
            kernel: Arc::new(kernel),
        }
    }
}

type Producer = dyn Fn(usize) -> Result<Level> + Send + Sync;

struct LevelCache {
    produce: Box<Producer>,
    memo: Mutex<BTreeMap<usize, Level>>,
}

/// A morphism of the profinite completion of finite kernels.
#[derive(Clone)]
pub struct ProKernel {
    dom: InverseSystem,
    cod: InverseSystem,
    levels: Arc<LevelCache>,
}

/// A pro-kernel out of the one-point system.
pub type ProState = ProKernel;

impl ProKernel {
    /// Wraps a level producer. The producer must be deterministic; its
    /// output is checked by [`ProKernel::validate`], not here.
    pub fn from_fn(
        dom: InverseSystem,
        cod: InverseSystem,
        produce: impl Fn(usize) -> Result<Level> + Send + Sync + 'static,
    ) -> Self {
        ProKernel {
            dom,
            cod,
            levels: Arc::new(LevelCache {
                produce: Box::new(produce),
                memo: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    /// Explicit level tables `levels[j] = (i(j), kernel)`, validated up to
    /// their length. Queries beyond the table are depth errors.
    pub fn from_levels(
        dom: InverseSystem,
        cod: InverseSystem,
        levels: Vec<(usize, FinKernel)>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::validation("level table is empty"));
        }
        let depth = levels.len() - 1;
        let table: Vec<Level> = levels.into_iter().map(|(i, k)| Level::new(i, k)).collect();
        let kernel = ProKernel::from_fn(dom, cod, move |j| {
            table.get(j).cloned().ok_or(Error::DepthExceeded {
                requested: j,
                available: depth,
            })
        });
        kernel.validate(depth)?;
        Ok(kernel)
    }

    pub fn dom(&self) -> &InverseSystem {
        &self.dom
    }

    pub fn cod(&self) -> &InverseSystem {
        &self.cod
    }

    pub fn level(&self, j: usize) -> Result<Level> {
        if let Some(level) = self.levels.memo.lock().expect("memo poisoned").get(&j) {
            return Ok(level.clone());
        }
        let level = (self.levels.produce)(j)?;
        self.levels
            .memo
            .lock()
            .expect("memo poisoned")
            .insert(j, level.clone());
        Ok(level)
    }

    pub fn kernel_at(&self, j: usize) -> Result<Arc<FinKernel>> {
        Ok(self.level(j)?.kernel)
    }

    /// The level-`j` kernel read from domain level `i >= i(j)`.
    pub fn kernel_from(&self, i: usize, j: usize) -> Result<FinKernel> {
        let level = self.level(j)?;
        if i < level.dom_level {
            return Err(Error::validation(format!(
                "level {j} needs domain level {} but {i} was requested",
                level.dom_level
            )));
        }
        projection_kernel(&self.dom, i, level.dom_level)?.then(&level.kernel)
    }

    /// Checks shapes, monotonicity of the domain schedule and every
    /// compatibility square for levels `0..=depth`.
    pub fn validate(&self, depth: usize) -> Result<()> {
        let mut previous: Option<Level> = None;
        for j in 0..=depth {
            let level = self.level(j)?;
            let rows = self.dom.level_size(level.dom_level)?;
            let cols = self.cod.level_size(j)?;
            if level.kernel.dom() != rows || level.kernel.cod() != cols {
                return Err(Error::dimension(format!(
                    "level {j} kernel is {}x{}, expected {rows}x{cols}",
                    level.kernel.dom(),
                    level.kernel.cod()
                )));
            }
            if let Some(prev) = previous {
                if level.dom_level < prev.dom_level {
                    return Err(Error::validation(format!(
                        "domain schedule decreases at level {j}"
                    )));
                }
                let upper = level
                    .kernel
                    .then(&projection_kernel(&self.cod, j, j - 1)?)?;
                let lower = projection_kernel(&self.dom, level.dom_level, prev.dom_level)?
                    .then(&prev.kernel)?;
                if upper != lower {
                    return Err(Error::validation(format!(
                        "compatibility square fails between levels {} and {j}",
                        j - 1
                    )));
                }
            }
            previous = Some(level);
        }
        Ok(())
    }

    pub fn is_compatible(&self, depth: usize) -> bool {
        self.validate(depth).is_ok()
    }

    pub fn identity(sys: &InverseSystem) -> Self {
        let s = sys.clone();
        ProKernel::from_fn(sys.clone(), sys.clone(), move |j| {
            Ok(Level::new(j, FinKernel::identity(s.level_size(j)?)))
        })
    }

    /// A kernel between finite sets, seen on constant systems.
    pub fn from_fin(kernel: FinKernel) -> Self {
        let dom = InverseSystem::constant(kernel.dom());
        let cod = InverseSystem::constant(kernel.cod());
        let level = Level::new(0, kernel);
        ProKernel::from_fn(dom, cod, move |_| Ok(level.clone()))
    }

    /// The deterministic pro-map given level-wise by functions
    /// `X_{i(j)} -> Y_j`.
    pub fn deterministic(
        dom: InverseSystem,
        cod: InverseSystem,
        map: impl Fn(usize) -> Result<(usize, Vec<usize>)> + Send + Sync + 'static,
    ) -> Self {
        let target = cod.clone();
        ProKernel::from_fn(dom, cod, move |j| {
            let (i, h) = map(j)?;
            Ok(Level::new(
                i,
                FinKernel::from_function(&h, target.level_size(j)?)?,
            ))
        })
    }

    pub fn discard(sys: &InverseSystem) -> Self {
        let s = sys.clone();
        ProKernel::from_fn(sys.clone(), InverseSystem::unit(), move |_| {
            Ok(Level::new(0, FinKernel::discard(s.level_size(0)?)))
        })
    }

    pub fn copy(sys: &InverseSystem) -> Self {
        let s = sys.clone();
        ProKernel::from_fn(sys.clone(), InverseSystem::pair(sys, sys), move |j| {
            Ok(Level::new(j, FinKernel::copy(s.level_size(j)?)))
        })
    }

    /// `X x Y -> Y x X`.
    pub fn swap(x: &InverseSystem, y: &InverseSystem) -> Self {
        let (a, b) = (x.clone(), y.clone());
        ProKernel::from_fn(
            InverseSystem::pair(x, y),
            InverseSystem::pair(y, x),
            move |j| {
                Ok(Level::new(
                    j,
                    FinKernel::swap(a.level_size(j)?, b.level_size(j)?),
                ))
            },
        )
    }

    /// Sequential composition: first `self`, then `next`.
    pub fn then(&self, next: &ProKernel) -> Result<ProKernel> {
        if self.cod != next.dom {
            return Err(Error::SystemMismatch(format!(
                "cannot compose into {} with a map out of {}",
                self.cod, next.dom
            )));
        }
        let (f, g) = (self.clone(), next.clone());
        Ok(ProKernel::from_fn(
            self.dom.clone(),
            next.cod.clone(),
            move |j| {
                let lg = g.level(j)?;
                let lf = f.level(lg.dom_level)?;
                Ok(Level::new(lf.dom_level, lf.kernel.then(&lg.kernel)?))
            },
        ))
    }

    pub fn tensor(&self, other: &ProKernel) -> ProKernel {
        let (f, g) = (self.clone(), other.clone());
        ProKernel::from_fn(
            InverseSystem::pair(&self.dom, &other.dom),
            InverseSystem::pair(&self.cod, &other.cod),
            move |j| {
                let i = f.level(j)?.dom_level.max(g.level(j)?.dom_level);
                Ok(Level::new(
                    i,
                    f.kernel_from(i, j)?.tensor(&g.kernel_from(i, j)?),
                ))
            },
        )
    }

    /// A state on `cod` given by one distribution per level.
    pub fn state(
        cod: InverseSystem,
        row: impl Fn(usize) -> Result<Vec<Rational>> + Send + Sync + 'static,
    ) -> Self {
        ProKernel::from_fn(InverseSystem::unit(), cod, move |j| {
            let row = row(j)?;
            Ok(Level::new(0, FinKernel::new(1, row.len(), row)?))
        })
    }

    /// Bernoulli state on `constant(2)`, probability `bias` of element 1.
    pub fn coin(bias: Rational) -> Result<ProState> {
        check_bias(&bias)?;
        let row = vec![rational::one() - &bias, bias];
        Ok(ProKernel::state(InverseSystem::constant(2), move |_| {
            Ok(row.clone())
        }))
    }

    /// Independent coin flips on `binary_prefix`: each bit is 1 with
    /// probability `bias`.
    pub fn coin_stream(bias: Rational) -> Result<ProState> {
        check_bias(&bias)?;
        let tails = rational::one() - &bias;
        let cache = Mutex::new(vec![vec![rational::one()]]);
        Ok(ProKernel::state(InverseSystem::binary_prefix(), move |j| {
            let mut rows = cache.lock().expect("coin cache poisoned");
            while rows.len() <= j {
                let last = rows.last().unwrap();
                let next: Vec<Rational> =
                    last.iter().flat_map(|p| [p * &tails, p * &bias]).collect();
                rows.push(next);
            }
            Ok(rows[j].clone())
        }))
    }

    /// The point mass on a thread.
    pub fn point(point: Point) -> ProState {
        let cod = point.system().clone();
        let sys = cod.clone();
        ProKernel::from_fn(InverseSystem::unit(), cod, move |j| {
            let h = [point.at(j)?];
            Ok(Level::new(
                0,
                FinKernel::from_function(&h, sys.level_size(j)?)?,
            ))
        })
    }

    /// True when the domain is the one-point system.
    pub fn is_state(&self) -> bool {
        self.dom.constant_size() == Some(1)
    }

    /// The distribution at level `j` of a state.
    pub fn distribution_at(&self, j: usize) -> Result<Vec<Rational>> {
        if !self.is_state() {
            return Err(Error::validation("not a state: domain is not the unit"));
        }
        Ok(self.kernel_at(j)?.row(0).to_vec())
    }
}

fn check_bias(bias: &Rational) -> Result<()> {
    if !rational::in_unit_interval(bias) {
        return Err(Error::validation(format!("bias {bias} is outside [0,1]")));
    }
    Ok(())
}

impl fmt::Debug for ProKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProKernel({} -> {})", self.dom, self.cod)
    }
}

/// The projection `X_m -> X_n` as a deterministic kernel.
pub fn projection_kernel(sys: &InverseSystem, m: usize, n: usize) -> Result<FinKernel> {
    FinKernel::from_function(&sys.projection(m, n)?, sys.level_size(n)?)
}

pub fn pro_compose(f: &ProKernel, g: &ProKernel) -> Result<ProKernel> {
    f.then(g)
}

pub fn pro_id(sys: &InverseSystem) -> ProKernel {
    ProKernel::identity(sys)
}

pub fn pro_copy(sys: &InverseSystem) -> ProKernel {
    ProKernel::copy(sys)
}

pub fn pro_discard(sys: &InverseSystem) -> ProKernel {
    ProKernel::discard(sys)
}

pub fn pro_swap(x: &InverseSystem, y: &InverseSystem) -> ProKernel {
    ProKernel::swap(x, y)
}

pub fn pro_tensor(f: &ProKernel, g: &ProKernel) -> ProKernel {
    f.tensor(g)
}

/// The first place two pro-kernels disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDifference {
    pub level: usize,
    pub dom_level: usize,
    pub row: usize,
    pub col: usize,
    pub left: Rational,
    pub right: Rational,
}

impl fmt::Display for LevelDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {} (domain level {}), entry ({}, {}): {} vs {}",
            self.level,
            self.dom_level,
            self.row,
            self.col,
            rational::format(&self.left),
            rational::format(&self.right)
        )
    }
}

fn check_same_shape(f: &ProKernel, g: &ProKernel) -> Result<()> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::SystemMismatch(format!(
            "{} -> {} vs {} -> {}",
            f.dom, f.cod, g.dom, g.cod
        )));
    }
    Ok(())
}

/// Compares levels `0..=depth`, each read from the common domain level.
pub fn first_difference(
    f: &ProKernel,
    g: &ProKernel,
    depth: usize,
) -> Result<Option<LevelDifference>> {
    check_same_shape(f, g)?;
    for j in 0..=depth {
        let i = f.level(j)?.dom_level.max(g.level(j)?.dom_level);
        let left = f.kernel_from(i, j)?;
        let right = g.kernel_from(i, j)?;
        if let Some(d) = left.first_difference(&right) {
            return Ok(Some(LevelDifference {
                level: j,
                dom_level: i,
                row: d.row,
                col: d.col,
                left: d.left,
                right: d.right,
            }));
        }
    }
    Ok(None)
}

pub fn equal_at_depth(f: &ProKernel, g: &ProKernel, depth: usize) -> Result<bool> {
    Ok(first_difference(f, g, depth)?.is_none())
}

/// First level kernel (up to `depth`) with an entry other than 0 or 1.
pub fn first_unsharp_entry(
    f: &ProKernel,
    depth: usize,
) -> Result<Option<(usize, usize, usize, Rational)>> {
    for j in 0..=depth {
        if let Some((r, c, v)) = f.kernel_at(j)?.first_unsharp_entry() {
            return Ok(Some((j, r, c, v)));
        }
    }
    Ok(None)
}

/// Every level kernel up to `depth` is a 0/1 matrix.
pub fn pro_is_deterministic(f: &ProKernel, depth: usize) -> Result<bool> {
    Ok(first_unsharp_entry(f, depth)?.is_none())
}

/// `copy ; (f (x) f)` and `f ; copy` compared up to `depth`.
pub fn satisfies_copy_equation(f: &ProKernel, depth: usize) -> Result<bool> {
    let lhs = f.then(&ProKernel::copy(&f.cod))?;
    let rhs = ProKernel::copy(&f.dom).then(&f.tensor(f))?;
    equal_at_depth(&lhs, &rhs, depth)
}

/// Projection of a product onto one factor, deterministic at every level.
///
/// For a countable product the factor only appears from level `factor` on,
/// so lower levels read from that level and project down.
pub fn marginal_projection(prod: &InverseSystem, factor: usize) -> Result<ProKernel> {
    let target = prod
        .factor(factor)
        .filter(|_| prod.countable_family().is_some() || factor < prod.factors().len())
        .ok_or_else(|| Error::validation(format!("no factor {factor} in {prod}")))?;
    if prod.factors().len() == 1 && prod.countable_family().is_none() {
        return Ok(ProKernel::identity(prod));
    }
    let sys = prod.clone();
    let t = target.clone();
    Ok(ProKernel::deterministic(prod.clone(), target, move |j| {
        let i = j.max(factor);
        let h = (0..sys.level_size(i)?)
            .map(|x| {
                let c = sys.coordinates(i, x)?[factor];
                t.project(i, j, c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((i, h))
    }))
}

/// Finite tensor product of states, a state on the finite product.
pub fn tensor_states(states: &[ProState]) -> Result<ProState> {
    let mut acc = ProKernel::identity(&InverseSystem::unit());
    for s in states {
        if !s.is_state() {
            return Err(Error::validation("tensor_states expects states"));
        }
        acc = acc.tensor(s);
    }
    Ok(acc)
}

/// Countable tensor product of the periodic family
/// `states[a % states.len()]`, a state on the countable product of their
/// codomains. Level `n` is the product of the factors' level-`n`
/// distributions for `a <= n`.
pub fn infinite_tensor_states(states: &[ProState]) -> Result<ProState> {
    if states.iter().any(|s| !s.is_state()) {
        return Err(Error::validation("infinite_tensor_states expects states"));
    }
    let cod = InverseSystem::countable_product(states.iter().map(|s| s.cod.clone()).collect())?;
    let family = states.to_vec();
    Ok(ProKernel::from_fn(InverseSystem::unit(), cod, move |n| {
        let mut row = vec![rational::one()];
        for a in 0..=n {
            let factor = family[a % family.len()].distribution_at(n)?;
            row = row
                .iter()
                .flat_map(|p| factor.iter().map(move |q| p * q))
                .collect();
        }
        let len = row.len();
        Ok(Level::new(0, FinKernel::new(1, len, row)?))
    }))
}

/// Probability of a cylinder under the limit measure of a state.
pub fn clopen_measure(state: &ProState, clopen: &Clopen) -> Result<Rational> {
    if clopen.system() != state.cod() {
        return Err(Error::SystemMismatch(format!(
            "clopen on {} but state on {}",
            clopen.system(),
            state.cod()
        )));
    }
    let row = state.distribution_at(clopen.level())?;
    Ok(clopen.subset().iter().map(|&y| &row[y]).sum())
}

fn check_conditional_shape(
    p: &ProKernel,
    y: &InverseSystem,
    l: &InverseSystem,
) -> Result<(usize, usize)> {
    let x_size = p
        .dom
        .constant_size()
        .ok_or_else(|| Error::validation(format!("domain {} is not finite", p.dom)))?;
    let y_size = y
        .constant_size()
        .ok_or_else(|| Error::validation(format!("{y} is not finite")))?;
    if p.cod != InverseSystem::pair(y, l) {
        return Err(Error::SystemMismatch(format!(
            "codomain {} is not {y} x {l}",
            p.cod
        )));
    }
    Ok((x_size, y_size))
}

/// Fiber masses `K(x, y)` computed from level `j` of `p: X -> Y x L`.
pub fn fiber_masses_at(
    p: &ProKernel,
    y: &InverseSystem,
    l: &InverseSystem,
    j: usize,
) -> Result<Vec<Rational>> {
    let (_, y_size) = check_conditional_shape(p, y, l)?;
    finker::fiber_masses(&*p.kernel_at(j)?, y_size, l.level_size(j)?)
}

/// Conditional of `p: X -> Y x L` for finite `X` and `Y`: a pro-kernel
/// `X x Y -> L` normalizing each fiber. Zero-mass fibers get the point mass
/// on the least thread through element 0 of `L`.
pub fn conditional(p: &ProKernel, y: &InverseSystem, l: &InverseSystem) -> Result<ProKernel> {
    let (_, y_size) = check_conditional_shape(p, y, l)?;
    let fallback = stone::least_thread(l, 0)?;
    let (joint, cod) = (p.clone(), l.clone());
    Ok(ProKernel::from_fn(
        InverseSystem::pair(&p.dom, y),
        l.clone(),
        move |j| {
            let kernel = joint.kernel_at(j)?;
            let z = cod.level_size(j)?;
            let k = finker::conditional_with_fallback(&kernel, y_size, z, fallback.at(j)?)?;
            Ok(Level::new(0, k))
        },
    ))
}

/// `p ; (id_Y (x) discard_L)`.
pub fn first_marginal(p: &ProKernel, y: &InverseSystem, l: &InverseSystem) -> Result<ProKernel> {
    p.then(&ProKernel::identity(y).tensor(&ProKernel::discard(l)))
}

/// Rebuilds `X -> Y x L` from a marginal `X -> Y` and a conditional
/// `X x Y -> L`.
pub fn recompose(marginal: &ProKernel, conditional: &ProKernel) -> Result<ProKernel> {
    let x = marginal.dom();
    let y = marginal.cod();
    let id_x = ProKernel::identity(x);
    let id_y = ProKernel::identity(y);
    ProKernel::copy(x)
        .then(&id_x.tensor(marginal))?
        .then(&id_x.tensor(&ProKernel::copy(y)))?
        .then(&ProKernel::swap(x, y).tensor(&id_y))?
        .then(&id_y.tensor(conditional))
}

/// The causality check of [`finker::causality_instance`], with equality
/// decided up to `depth`.
pub fn causality_at_depth(
    f: &ProKernel,
    g: &ProKernel,
    h1: &ProKernel,
    h2: &ProKernel,
    depth: usize,
) -> Result<CausalityOutcome> {
    let b = g.dom();
    let c = g.cod();
    let id_b = ProKernel::identity(b);
    let id_c = ProKernel::identity(c);
    let gc = f.then(g)?.then(&ProKernel::copy(c))?;
    let hypothesis = equal_at_depth(
        &gc.then(&h1.tensor(&id_c))?,
        &gc.then(&h2.tensor(&id_c))?,
        depth,
    )?;
    let head = f.then(&ProKernel::copy(b))?;
    let inner = g.then(&ProKernel::copy(c))?;
    let side = |h: &ProKernel| -> Result<ProKernel> {
        head.then(&inner.then(&h.tensor(&id_c))?.tensor(&id_b))
    };
    let conclusion = equal_at_depth(&side(h1)?, &side(h2)?, depth)?;
    Ok(CausalityOutcome {
        hypothesis,
        conclusion,
    })
}

/// Total mass assigned by a level distribution to a subset.
pub fn subset_mass(row: &[Rational], subset: impl IntoIterator<Item = usize>) -> Rational {
    subset
        .into_iter()
        .fold(Rational::zero(), |acc, y| acc + &row[y])
}
