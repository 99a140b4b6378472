//! The Boolean-algebra side: finite Boolean algebras, the interval effect
//! functor, measures, step functions and Boolean kernels.
//!
//! A finite Boolean algebra is the powerset of its atoms. A kernel
//! `A ~> B` in this presentation points the other way, from elements of `B`
//! to step functions on the atoms of `A` (an element of `I (x) A`), and is
//! stored by its values on the atoms of `B`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::finker::FinKernel;
use crate::rational::{self, Rational};

/// A finite Boolean algebra, the powerset of `atoms` atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FinBoolAlg {
    atoms: usize,
}

/// An element of a finite Boolean algebra: a set of atoms.
pub type Element = std::collections::BTreeSet<usize>;

impl FinBoolAlg {
    pub fn new(atoms: usize) -> Self {
        FinBoolAlg { atoms }
    }

    /// The initial algebra `{bot, top}`.
    pub fn two() -> Self {
        FinBoolAlg { atoms: 1 }
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn top(&self) -> Element {
        (0..self.atoms).collect()
    }

    pub fn bottom(&self) -> Element {
        Element::new()
    }

    pub fn atom(&self, a: usize) -> Element {
        Element::from([a])
    }

    pub fn complement(&self, e: &Element) -> Element {
        (0..self.atoms).filter(|a| !e.contains(a)).collect()
    }

    /// All `2^atoms` elements, in bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        assert!(self.atoms < 24, "too many atoms to enumerate elements");
        (0u32..1 << self.atoms)
            .map(move |mask| (0..self.atoms).filter(|a| mask >> a & 1 == 1).collect())
    }
}

/// Coproduct of finite Boolean algebras: atoms are pairs, row-major.
pub fn coproduct(a: FinBoolAlg, b: FinBoolAlg) -> FinBoolAlg {
    FinBoolAlg::new(a.atoms * b.atoms)
}

/// Injections into the coproduct: an element goes to its preimage under the
/// projection of pair atoms.
pub fn coproduct_injections(
    a: FinBoolAlg,
    b: FinBoolAlg,
) -> (impl Fn(&Element) -> Element, impl Fn(&Element) -> Element) {
    let nb = b.atoms;
    let na = a.atoms;
    let left = move |e: &Element| {
        e.iter()
            .flat_map(|&x| (0..nb).map(move |y| x * nb + y))
            .collect()
    };
    let right = move |e: &Element| {
        (0..na)
            .flat_map(|x| e.iter().map(move |&y| x * nb + y))
            .collect()
    };
    (left, right)
}

/// A point of `I(n)`: a probability vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<Rational>,
}

impl Distribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| !rational::in_unit_interval(w)) {
            return Err(Error::validation("weight outside [0,1]"));
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::validation(format!("weights sum to {sum}, not 1")));
        }
        Ok(Distribution { weights })
    }

    /// The unique distribution on one point, the unit of `I`.
    pub fn unit() -> Self {
        Distribution {
            weights: vec![rational::one()],
        }
    }

    pub fn point(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::validation(format!("{at} is not below {n}")));
        }
        let mut weights = vec![Rational::zero(); n];
        weights[at] = rational::one();
        Ok(Distribution { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Product distribution on `a x b`, row-major.
    pub fn product(&self, other: &Distribution) -> Distribution {
        let weights = self
            .weights
            .iter()
            .flat_map(|p| other.weights.iter().map(move |q| p * q))
            .collect();
        Distribution { weights }
    }
}

fn check_map(f: &[usize], n: usize) -> Result<()> {
    match f.iter().find(|&&y| y >= n) {
        Some(y) => Err(Error::validation(format!(
            "map value {y} out of range 0..{n}"
        ))),
        None => Ok(()),
    }
}

/// The action of `f: m -> n` on `I(m)`: `i |-> sum over f(j) = i of phi(j)`.
pub fn i_action(f: &[usize], n: usize, phi: &Distribution) -> Result<Distribution> {
    if f.len() != phi.len() {
        return Err(Error::dimension(format!(
            "map on {} points applied to a distribution on {}",
            f.len(),
            phi.len()
        )));
    }
    check_map(f, n)?;
    let mut weights = vec![Rational::zero(); n];
    for (j, &i) in f.iter().enumerate() {
        weights[i] += &phi.weights[j];
    }
    Ok(Distribution { weights })
}

/// The monoid multiplication of `I`: push the product of `phi` and `psi`
/// along `f: a x b -> n` (pairs row-major).
pub fn i_mult(
    f: &[usize],
    n: usize,
    phi: &Distribution,
    psi: &Distribution,
) -> Result<Distribution> {
    if f.len() != phi.len() * psi.len() {
        return Err(Error::dimension(format!(
            "map on {} points, expected {} x {}",
            f.len(),
            phi.len(),
            psi.len()
        )));
    }
    i_action(f, n, &phi.product(psi))
}

/// A measure table on all elements of an algebra.
pub type MeasureTable = BTreeMap<Element, Rational>;

/// Checks that `m` is defined everywhere, takes values in `[0,1]`, sends
/// bottom to 0 and top to 1, and is additive on disjoint pairs.
pub fn measure_check(alg: FinBoolAlg, m: &MeasureTable) -> bool {
    let elements: Vec<Element> = alg.elements().collect();
    let mut values = Vec::with_capacity(elements.len());
    for e in &elements {
        match m.get(e) {
            Some(v) if rational::in_unit_interval(v) => values.push(v),
            _ => return false,
        }
    }
    if !values[0].is_zero() || !values[values.len() - 1].is_one() {
        return false;
    }
    // elements are in bitmask order, so index == mask
    for a in 0..elements.len() {
        for b in 0..elements.len() {
            if a & b == 0 && *values[a | b] != values[a] + values[b] {
                return false;
            }
        }
    }
    true
}

/// The measure of a distribution on atoms.
pub fn measure_from_distribution(alg: FinBoolAlg, phi: &Distribution) -> Result<MeasureTable> {
    if phi.len() != alg.atoms {
        return Err(Error::dimension("distribution does not match the atoms"));
    }
    Ok(alg
        .elements()
        .map(|e| {
            let v = e.iter().map(|&a| &phi.weights[a]).sum();
            (e, v)
        })
        .collect())
}

/// The distribution on atoms of a measure.
pub fn distribution_from_measure(alg: FinBoolAlg, m: &MeasureTable) -> Result<Distribution> {
    if !measure_check(alg, m) {
        return Err(Error::validation(
            "not a finitely additive probability measure",
        ));
    }
    Distribution::new((0..alg.atoms).map(|a| m[&alg.atom(a)].clone()).collect())
}

/// A `[0,1]`-valued function on the atoms of an algebra: an element of
/// `I (x) A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    values: Vec<Rational>,
}

impl StepFunction {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !rational::in_unit_interval(v)) {
            return Err(Error::validation(format!("step value {v} outside [0,1]")));
        }
        Ok(StepFunction { values })
    }

    pub fn constant(atoms: usize, value: Rational) -> Result<Self> {
        Self::new(vec![value; atoms])
    }

    pub fn indicator(atoms: usize, e: &Element) -> Self {
        let values = (0..atoms)
            .map(|a| {
                if e.contains(&a) {
                    rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        StepFunction { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Groups atoms by nonzero value: `sum alpha_i (x) a_i` with the `a_i`
    /// pairwise disjoint and the `alpha_i` distinct.
    pub fn decompose(&self) -> Vec<(Rational, Element)> {
        let mut groups: BTreeMap<Rational, Element> = BTreeMap::new();
        for (a, v) in self.values.iter().enumerate() {
            if !v.is_zero() {
                groups.entry(v.clone()).or_default().insert(a);
            }
        }
        groups.into_iter().collect()
    }

    /// Indicator of an element of the algebra.
    pub fn is_sharp(&self) -> bool {
        self.decompose().iter().all(|(alpha, _)| alpha.is_one())
    }

    fn add(&self, other: &StepFunction) -> Vec<Rational> {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// A kernel `A ~> B` presented as a map from elements of `B` (the source)
/// to step functions over `A` (the target), stored on the atoms of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BKerMap {
    source: FinBoolAlg,
    target: FinBoolAlg,
    atom_values: Vec<StepFunction>,
}

impl BKerMap {
    /// From values on atoms. For each atom of the target the values over the
    /// source atoms must sum to 1, which makes the additive extension send
    /// top to the constant 1.
    pub fn from_atoms(
        source: FinBoolAlg,
        target: FinBoolAlg,
        atom_values: Vec<StepFunction>,
    ) -> Result<Self> {
        if atom_values.len() != source.atoms {
            return Err(Error::dimension(format!(
                "{} atom values for {} source atoms",
                atom_values.len(),
                source.atoms
            )));
        }
        if let Some(b) = atom_values
            .iter()
            .position(|s| s.values.len() != target.atoms)
        {
            return Err(Error::dimension(format!(
                "value on atom {b} is not a step function on {} atoms",
                target.atoms
            )));
        }
        for x in 0..target.atoms {
            let total: Rational = atom_values.iter().map(|s| &s.values[x]).sum();
            if !total.is_one() {
                return Err(Error::validation(format!(
                    "values at target atom {x} sum to {total}, not 1"
                )));
            }
        }
        Ok(BKerMap {
            source,
            target,
            atom_values,
        })
    }

    /// From a full table on every element of the source; checks the unit
    /// and additivity laws before keeping the atom values.
    pub fn from_assignment(
        source: FinBoolAlg,
        target: FinBoolAlg,
        table: &BTreeMap<Element, StepFunction>,
    ) -> Result<Self> {
        let elements: Vec<Element> = source.elements().collect();
        let mut values = Vec::with_capacity(elements.len());
        for e in &elements {
            let v = table
                .get(e)
                .ok_or_else(|| Error::validation(format!("no value for element {e:?}")))?;
            if v.values.len() != target.atoms {
                return Err(Error::dimension("step function on the wrong algebra"));
            }
            values.push(v);
        }
        if values[0].values.iter().any(|v| !v.is_zero()) {
            return Err(Error::validation("bottom is not sent to 0"));
        }
        if values[values.len() - 1].values.iter().any(|v| !v.is_one()) {
            return Err(Error::validation("top is not sent to 1"));
        }
        for a in 0..elements.len() {
            for b in 0..elements.len() {
                if a & b == 0 && values[a | b].values != values[a].add(values[b]) {
                    return Err(Error::validation(format!(
                        "not additive on {:?} and {:?}",
                        elements[a], elements[b]
                    )));
                }
            }
        }
        let atom_values = (0..source.atoms).map(|b| values[1 << b].clone()).collect();
        Self::from_atoms(source, target, atom_values)
    }

    pub fn source(&self) -> FinBoolAlg {
        self.source
    }

    pub fn target(&self) -> FinBoolAlg {
        self.target
    }

    pub fn atom_values(&self) -> &[StepFunction] {
        &self.atom_values
    }

    /// The additive extension to an arbitrary element of the source.
    pub fn apply(&self, e: &Element) -> StepFunction {
        let mut values = vec![Rational::zero(); self.target.atoms];
        for &b in e {
            for (v, w) in values.iter_mut().zip(&self.atom_values[b].values) {
                *v += w;
            }
        }
        StepFunction { values }
    }

    /// Full element table, the inverse of [`BKerMap::from_assignment`].
    pub fn assignment(&self) -> BTreeMap<Element, StepFunction> {
        self.source
            .elements()
            .map(|e| {
                let v = self.apply(&e);
                (e, v)
            })
            .collect()
    }

    /// Kernel composition `A ~> B ~> C`: `self` is `A ~> B`, `next` is
    /// `B ~> C`. An atom `c` goes to `sum_b next(c)(b) * self(b)`.
    pub fn then(&self, next: &BKerMap) -> Result<BKerMap> {
        if next.target != self.source {
            return Err(Error::dimension("Boolean kernels do not compose"));
        }
        let atom_values = next
            .atom_values
            .iter()
            .map(|step| {
                let mut values = vec![Rational::zero(); self.target.atoms];
                for (b, weight) in step.values.iter().enumerate() {
                    if weight.is_zero() {
                        continue;
                    }
                    for (v, w) in values.iter_mut().zip(&self.atom_values[b].values) {
                        *v += weight * w;
                    }
                }
                StepFunction { values }
            })
            .collect();
        Ok(BKerMap {
            source: next.source,
            target: self.target,
            atom_values,
        })
    }

    /// Tensor: source and target are coproducts, atoms multiply.
    pub fn tensor(&self, other: &BKerMap) -> BKerMap {
        let mut atom_values = Vec::with_capacity(self.source.atoms * other.source.atoms);
        for s in &self.atom_values {
            for t in &other.atom_values {
                let values = s
                    .values
                    .iter()
                    .flat_map(|a| t.values.iter().map(move |c| a * c))
                    .collect();
                atom_values.push(StepFunction { values });
            }
        }
        BKerMap {
            source: coproduct(self.source, other.source),
            target: coproduct(self.target, other.target),
            atom_values,
        }
    }

    /// The identity kernel: atoms to their indicators.
    pub fn identity(alg: FinBoolAlg) -> BKerMap {
        let atom_values = (0..alg.atoms)
            .map(|a| StepFunction::indicator(alg.atoms, &alg.atom(a)))
            .collect();
        BKerMap {
            source: alg,
            target: alg,
            atom_values,
        }
    }
}

/// The Boolean kernel of a finite kernel `A -> B`: atom `b` goes to
/// `x |-> k(x, b)`.
pub fn bker_from_finkernel(k: &FinKernel) -> BKerMap {
    let atom_values = (0..k.cod())
        .map(|b| StepFunction {
            values: (0..k.dom()).map(|x| k.get(x, b).clone()).collect(),
        })
        .collect();
    BKerMap {
        source: FinBoolAlg::new(k.cod()),
        target: FinBoolAlg::new(k.dom()),
        atom_values,
    }
}

/// Inverse of [`bker_from_finkernel`]: `k(x, b) = m(atom b)(x)`.
pub fn to_finkernel(m: &BKerMap) -> Result<FinKernel> {
    let dom = m.target.atoms;
    let cod = m.source.atoms;
    let mut entries = Vec::with_capacity(dom * cod);
    for x in 0..dom {
        for b in 0..cod {
            entries.push(m.atom_values[b].values[x].clone());
        }
    }
    FinKernel::new(dom, cod, entries)
}

/// The codiagonal of `A + A -> A` followed by the unit of `I`.
pub fn cocopy(alg: FinBoolAlg) -> BKerMap {
    let n = alg.atoms;
    let atom_values = (0..n * n)
        .map(|pair| {
            let (a, b) = (pair / n, pair % n);
            let diag = if a == b {
                Element::from([a])
            } else {
                Element::new()
            };
            StepFunction::indicator(n, &diag)
        })
        .collect();
    BKerMap {
        source: coproduct(alg, alg),
        target: alg,
        atom_values,
    }
}

/// The unique map out of the two-element algebra.
pub fn codiscard(alg: FinBoolAlg) -> BKerMap {
    BKerMap {
        source: FinBoolAlg::two(),
        target: alg,
        atom_values: vec![StepFunction::indicator(alg.atoms, &alg.top())],
    }
}

/// Every atom value has an orthogonal decomposition with coefficients 1.
pub fn is_deterministic_bker(m: &BKerMap) -> bool {
    m.atom_values.iter().all(StepFunction::is_sharp)
}

/// The copy equation in Boolean form: `m ; cocopy = cocopy ; (m (x) m)` as
/// kernels.
pub fn satisfies_cocopy_equation(m: &BKerMap) -> bool {
    let lhs = m.then(&cocopy(m.source)).expect("shapes agree");
    let rhs = cocopy(m.target).then(&m.tensor(m)).expect("shapes agree");
    lhs == rhs
}

/// Whether flipping coordinate `i` changes `f` somewhere. `table` is indexed
/// by bit vectors of length `depth`, coordinate 0 the most significant bit.
pub fn depends_on_coordinate(table: &[Rational], depth: usize, i: usize) -> Result<bool> {
    if table.len() != 1 << depth {
        return Err(Error::dimension(format!(
            "table has {} entries, expected 2^{depth}",
            table.len()
        )));
    }
    if i >= depth {
        return Err(Error::validation(format!(
            "coordinate {i} >= depth {depth}"
        )));
    }
    let bit = 1 << (depth - 1 - i);
    Ok((0..table.len()).any(|x| table[x] != table[x ^ bit]))
}

/// `x |-> sum_i x_i 2^(-i-1)` on bit vectors of length `depth`.
pub fn bernoulli_bias_table(depth: usize) -> Vec<Rational> {
    let den = num_bigint::BigInt::from(1u64) << depth;
    (0..1u64 << depth)
        .map(|x| Rational::new(x.into(), den.clone()))
        .collect()
}

/// Two bit vectors agreeing on their first `prefix` coordinates whose bias
/// values differ, if there are any.
pub fn bias_witness(table: &[Rational], depth: usize, prefix: usize) -> Option<(usize, usize)> {
    for i in prefix..depth {
        let bit = 1 << (depth - 1 - i);
        if let Some(x) = (0..table.len()).find(|&x| table[x] != table[x ^ bit]) {
            return Some((x, x ^ bit));
        }
    }
    None
}
