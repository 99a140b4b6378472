//! Finite sets and exact stochastic kernels.
//!
//! A [`FinKernel`] from a set of size `n` to a set of size `m` is an `n x m`
//! row-stochastic matrix of rationals. Pairs `(a, b)` in `A x B` are indexed
//! row-major as `a * |B| + b`, so iterated products flatten the same way
//! regardless of bracketing.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A morphism of finite stochastic kernels, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinKernel {
    dom: usize,
    cod: usize,
    entries: Vec<Rational>,
}

/// Where two kernels of the same shape first disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDifference {
    pub row: usize,
    pub col: usize,
    pub left: Rational,
    pub right: Rational,
}

impl FinKernel {
    /// Validates shape, range and row sums.
    pub fn new(dom: usize, cod: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != dom * cod {
            return Err(Error::dimension(format!(
                "{} entries for a {dom}x{cod} kernel",
                entries.len()
            )));
        }
        if cod == 0 && dom != 0 {
            return Err(Error::validation(
                "a kernel into the empty set must have empty domain",
            ));
        }
        for x in 0..dom {
            let row = &entries[x * cod..(x + 1) * cod];
            if let Some(col) = row.iter().position(|v| !rational::in_unit_interval(v)) {
                return Err(Error::validation(format!(
                    "entry ({x},{col}) = {} is outside [0,1]",
                    row[col]
                )));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::validation(format!("row {x} sums to {sum}, not 1")));
            }
        }
        Ok(FinKernel { dom, cod, entries })
    }

    pub fn from_rows(cod: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dom = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != cod) {
            return Err(Error::dimension(format!(
                "row {bad} has {} entries, expected {cod}",
                rows[bad].len()
            )));
        }
        Self::new(dom, cod, rows.into_iter().flatten().collect())
    }

    /// Construction for results that are stochastic by construction.
    pub(crate) fn from_raw(dom: usize, cod: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), dom * cod);
        FinKernel { dom, cod, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_map_unchecked(n, &(0..n).collect::<Vec<_>>())
    }

    /// The deterministic kernel of a function `h: dom -> cod`.
    pub fn from_function(h: &[usize], cod: usize) -> Result<Self> {
        if let Some(x) = h.iter().position(|&y| y >= cod) {
            return Err(Error::validation(format!(
                "function value h({x}) = {} out of range 0..{cod}",
                h[x]
            )));
        }
        Ok(Self::from_map_unchecked(cod, h))
    }

    fn from_map_unchecked(cod: usize, h: &[usize]) -> Self {
        let mut entries = vec![Rational::zero(); h.len() * cod];
        for (x, &y) in h.iter().enumerate() {
            entries[x * cod + y] = Rational::one();
        }
        FinKernel::from_raw(h.len(), cod, entries)
    }

    pub fn copy(n: usize) -> Self {
        let h: Vec<usize> = (0..n).map(|x| x * n + x).collect();
        Self::from_map_unchecked(n * n, &h)
    }

    pub fn discard(n: usize) -> Self {
        Self::from_map_unchecked(1, &vec![0; n])
    }

    /// `A x B -> B x A`.
    pub fn swap(a: usize, b: usize) -> Self {
        let h: Vec<usize> = (0..a * b).map(|i| (i % b) * a + i / b).collect();
        Self::from_map_unchecked(a * b, &h)
    }

    /// The kernel with every row equal to `row`.
    pub fn constant(dom: usize, row: &[Rational]) -> Result<Self> {
        let entries = (0..dom).flat_map(|_| row.iter().cloned()).collect();
        Self::new(dom, row.len(), entries)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn get(&self, x: usize, y: usize) -> &Rational {
        &self.entries[x * self.cod + y]
    }

    pub fn row(&self, x: usize) -> &[Rational] {
        &self.entries[x * self.cod..(x + 1) * self.cod]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.dom).map(move |x| self.row(x))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Sequential composition: first `self`, then `next`.
    pub fn then(&self, next: &FinKernel) -> Result<FinKernel> {
        if self.cod != next.dom {
            return Err(Error::dimension(format!(
                "cannot compose {}->{} with {}->{}",
                self.dom, self.cod, next.dom, next.cod
            )));
        }
        let mut entries = vec![Rational::zero(); self.dom * next.cod];
        for x in 0..self.dom {
            let out = &mut entries[x * next.cod..(x + 1) * next.cod];
            for (y, weight) in self.row(x).iter().enumerate() {
                if weight.is_zero() {
                    continue;
                }
                for (z, v) in next.row(y).iter().enumerate() {
                    if !v.is_zero() {
                        out[z] += weight * v;
                    }
                }
            }
        }
        Ok(FinKernel::from_raw(self.dom, next.cod, entries))
    }

    /// Parallel product; `((x, c), (y, d))` gets `self(x, y) * other(c, d)`.
    pub fn tensor(&self, other: &FinKernel) -> FinKernel {
        let dom = self.dom * other.dom;
        let cod = self.cod * other.cod;
        let mut entries = vec![Rational::zero(); dom * cod];
        for x in 0..self.dom {
            for c in 0..other.dom {
                let r = x * other.dom + c;
                for (y, a) in self.row(x).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (d, b) in other.row(c).iter().enumerate() {
                        if !b.is_zero() {
                            entries[r * cod + y * other.cod + d] = a * b;
                        }
                    }
                }
            }
        }
        FinKernel::from_raw(dom, cod, entries)
    }

    /// Every entry is 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.entries.iter().all(rational::is_sharp)
    }

    /// Checks `copy . f = (f (x) f) . copy` by evaluating both composites.
    pub fn satisfies_copy_equation(&self) -> bool {
        let lhs = self.then(&FinKernel::copy(self.cod)).expect("shapes agree");
        let rhs = FinKernel::copy(self.dom)
            .then(&self.tensor(self))
            .expect("shapes agree");
        lhs == rhs
    }

    /// The underlying function of a deterministic kernel.
    pub fn as_function(&self) -> Option<Vec<usize>> {
        self.rows()
            .map(|row| {
                if row.iter().all(rational::is_sharp) {
                    row.iter().position(|v| v.is_one())
                } else {
                    None
                }
            })
            .collect()
    }

    /// First entry (row-major) where two same-shaped kernels differ.
    pub fn first_difference(&self, other: &FinKernel) -> Option<EntryDifference> {
        if self.dom != other.dom || self.cod != other.cod {
            return None;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|i| EntryDifference {
                row: i / self.cod,
                col: i % self.cod,
                left: self.entries[i].clone(),
                right: other.entries[i].clone(),
            })
    }

    /// First entry that is neither 0 nor 1.
    pub fn first_unsharp_entry(&self) -> Option<(usize, usize, Rational)> {
        self.entries
            .iter()
            .position(|v| !rational::is_sharp(v))
            .map(|i| (i / self.cod, i % self.cod, self.entries[i].clone()))
    }

    /// Renders one row per line, entries as `p/q` separated by spaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(rational::format).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for FinKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinKernel({}->{})\n{}",
            self.dom,
            self.cod,
            self.render()
        )
    }
}

pub fn compose(f: &FinKernel, g: &FinKernel) -> Result<FinKernel> {
    f.then(g)
}

pub fn tensor(f: &FinKernel, g: &FinKernel) -> FinKernel {
    f.tensor(g)
}

pub fn copy(n: usize) -> FinKernel {
    FinKernel::copy(n)
}

pub fn discard(n: usize) -> FinKernel {
    FinKernel::discard(n)
}

pub fn from_function(h: &[usize], cod: usize) -> Result<FinKernel> {
    FinKernel::from_function(h, cod)
}

pub fn is_deterministic(f: &FinKernel) -> bool {
    f.is_deterministic()
}

fn check_pair_cod(p: &FinKernel, y: usize, z: usize) -> Result<()> {
    if p.cod() != y * z {
        return Err(Error::dimension(format!(
            "codomain of size {} is not {y} x {z}",
            p.cod()
        )));
    }
    Ok(())
}

/// Mass of each fiber: `K(x, y) = sum_z p(x, (y, z))`, indexed `x * y_size + y`.
pub fn fiber_masses(p: &FinKernel, y: usize, z: usize) -> Result<Vec<Rational>> {
    check_pair_cod(p, y, z)?;
    let mut masses = Vec::with_capacity(p.dom() * y);
    for x in 0..p.dom() {
        let row = p.row(x);
        for yi in 0..y {
            masses.push(row[yi * z..(yi + 1) * z].iter().sum());
        }
    }
    Ok(masses)
}

/// Conditional of `p: X -> Y x Z`, a kernel `X x Y -> Z`.
///
/// Fibers of zero mass get the point mass at element 0 of `Z`.
pub fn conditional_fin(p: &FinKernel, y: usize, z: usize) -> Result<FinKernel> {
    conditional_with_fallback(p, y, z, 0)
}

/// As [`conditional_fin`], with zero-mass fibers sent to `fallback`.
pub fn conditional_with_fallback(
    p: &FinKernel,
    y: usize,
    z: usize,
    fallback: usize,
) -> Result<FinKernel> {
    let masses = fiber_masses(p, y, z)?;
    if fallback >= z && masses.iter().any(|m| m.is_zero()) {
        return Err(Error::validation(format!(
            "fallback {fallback} is not an element of a set of size {z}"
        )));
    }
    let dom = p.dom() * y;
    let mut entries = vec![Rational::zero(); dom * z];
    for x in 0..p.dom() {
        for yi in 0..y {
            let r = x * y + yi;
            let mass = &masses[r];
            let out = &mut entries[r * z..(r + 1) * z];
            if mass.is_zero() {
                out[fallback] = Rational::one();
            } else {
                for (zi, v) in p.row(x)[yi * z..(yi + 1) * z].iter().enumerate() {
                    out[zi] = v / mass;
                }
            }
        }
    }
    Ok(FinKernel::from_raw(dom, z, entries))
}

/// `p ; (id_Y (x) discard_Z)`.
pub fn first_marginal(p: &FinKernel, y: usize, z: usize) -> Result<FinKernel> {
    check_pair_cod(p, y, z)?;
    p.then(&FinKernel::identity(y).tensor(&FinKernel::discard(z)))
}

/// Rebuilds a joint `X -> Y x Z` from a marginal `X -> Y` and a conditional
/// `X x Y -> Z`: copy `X`, draw `y`, copy `y`, and feed `(x, y)` to the
/// conditional.
pub fn recompose(marginal: &FinKernel, conditional: &FinKernel) -> Result<FinKernel> {
    let x = marginal.dom();
    let y = marginal.cod();
    if conditional.dom() != x * y {
        return Err(Error::dimension(format!(
            "conditional domain {} is not {x} x {y}",
            conditional.dom()
        )));
    }
    let id_x = FinKernel::identity(x);
    let id_y = FinKernel::identity(y);
    FinKernel::copy(x)
        .then(&id_x.tensor(marginal))?
        .then(&id_x.tensor(&FinKernel::copy(y)))?
        .then(&FinKernel::swap(x, y).tensor(&id_y))?
        .then(&id_y.tensor(conditional))
}

/// Result of checking one causality instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CausalityOutcome {
    pub hypothesis: bool,
    pub conclusion: bool,
}

impl CausalityOutcome {
    /// A counterexample would have a true hypothesis and a false conclusion.
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

/// The two `A -> D x C` composites `f ; g ; copy_C ; (h_i (x) id_C)`.
pub fn causality_hypothesis_sides(
    f: &FinKernel,
    g: &FinKernel,
    h1: &FinKernel,
    h2: &FinKernel,
) -> Result<(FinKernel, FinKernel)> {
    check_causality_shapes(f, g, h1, h2)?;
    let c = g.cod();
    let gf = f.then(g)?.then(&FinKernel::copy(c))?;
    let id_c = FinKernel::identity(c);
    Ok((gf.then(&h1.tensor(&id_c))?, gf.then(&h2.tensor(&id_c))?))
}

/// The two `A -> (D x C) x B` composites that also keep a copy of `B`.
pub fn causality_conclusion_sides(
    f: &FinKernel,
    g: &FinKernel,
    h1: &FinKernel,
    h2: &FinKernel,
) -> Result<(FinKernel, FinKernel)> {
    check_causality_shapes(f, g, h1, h2)?;
    let b = g.dom();
    let c = g.cod();
    let id_b = FinKernel::identity(b);
    let id_c = FinKernel::identity(c);
    let head = f.then(&FinKernel::copy(b))?;
    let inner = g.then(&FinKernel::copy(c))?;
    let side = |h: &FinKernel| -> Result<FinKernel> {
        head.then(&inner.then(&h.tensor(&id_c))?.tensor(&id_b))
    };
    Ok((side(h1)?, side(h2)?))
}

fn check_causality_shapes(
    f: &FinKernel,
    g: &FinKernel,
    h1: &FinKernel,
    h2: &FinKernel,
) -> Result<()> {
    if f.cod() != g.dom() || g.cod() != h1.dom() {
        return Err(Error::dimension("f, g, h do not compose"));
    }
    if h1.dom() != h2.dom() || h1.cod() != h2.cod() {
        return Err(Error::dimension("h1 and h2 have different shapes"));
    }
    Ok(())
}

pub fn causality_instance(
    f: &FinKernel,
    g: &FinKernel,
    h1: &FinKernel,
    h2: &FinKernel,
) -> Result<CausalityOutcome> {
    let (l, r) = causality_hypothesis_sides(f, g, h1, h2)?;
    let (cl, cr) = causality_conclusion_sides(f, g, h1, h2)?;
    Ok(CausalityOutcome {
        hypothesis: l == r,
        conclusion: cl == cr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, ratio, zero};

    fn k(cod: usize, rows: &[&[(i64, i64)]]) -> FinKernel {
        FinKernel::from_rows(
            cod,
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| ratio(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            FinKernel::new(1, 2, vec![ratio(1, 2)]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            FinKernel::new(1, 2, vec![ratio(1, 2), ratio(1, 3)]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            FinKernel::new(1, 2, vec![ratio(3, 2), ratio(-1, 2)]),
            Err(Error::Validation(_))
        ));
        assert!(FinKernel::new(1, 0, vec![]).is_err());
        assert!(FinKernel::new(0, 0, vec![]).is_ok());
        assert!(FinKernel::new(0, 3, vec![]).is_ok());
    }

    #[test]
    fn compose_examples() {
        let g = k(2, &[&[(1, 3), (2, 3)], &[(1, 1), (0, 1)]]);
        assert_eq!(FinKernel::identity(2).then(&g).unwrap(), g);

        let half = k(2, &[&[(1, 2), (1, 2)]]);
        assert_eq!(half.then(&FinKernel::identity(2)).unwrap(), half);

        let f = k(2, &[&[(1, 3), (2, 3)]]);
        let g = k(2, &[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]]);
        // 1/3 * 1/2 = 1/6 ; 1/3 * 1/2 + 2/3 = 5/6
        assert_eq!(f.then(&g).unwrap(), k(2, &[&[(1, 6), (5, 6)]]));

        assert!(matches!(
            g.then(&FinKernel::identity(3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn tensor_examples() {
        let id2 = FinKernel::identity(2);
        assert_eq!(id2.tensor(&id2), FinKernel::identity(4));

        let half = k(2, &[&[(1, 2), (1, 2)]]);
        let point = k(2, &[&[(1, 1), (0, 1)]]);
        assert_eq!(
            half.tensor(&point),
            k(4, &[&[(1, 2), (0, 1), (1, 2), (0, 1)]])
        );

        let f = k(3, &[&[(1, 2), (1, 4), (1, 4)], &[(0, 1), (0, 1), (1, 1)]]);
        let forget = f.tensor(&FinKernel::discard(2));
        // (x, c) -> y ignores c
        for x in 0..2 {
            for c in 0..2 {
                assert_eq!(forget.row(x * 2 + c), f.row(x));
            }
        }
    }

    #[test]
    fn copy_and_discard() {
        assert_eq!(FinKernel::copy(1), FinKernel::identity(1));
        let c2 = FinKernel::copy(2);
        assert_eq!(c2.dom(), 2);
        assert_eq!(c2.cod(), 4);
        assert_eq!(c2.as_function().unwrap(), vec![0, 3]);
        let c3 = FinKernel::copy(3);
        let counit = c3
            .then(&FinKernel::identity(3).tensor(&FinKernel::discard(3)))
            .unwrap();
        assert_eq!(counit, FinKernel::identity(3));

        assert_eq!(FinKernel::discard(2).entries(), &[one(), one()]);
        assert_eq!(FinKernel::discard(1), FinKernel::identity(1));
        let f = k(3, &[&[(1, 2), (1, 4), (1, 4)], &[(0, 1), (0, 1), (1, 1)]]);
        assert_eq!(
            f.then(&FinKernel::discard(3)).unwrap(),
            FinKernel::discard(2)
        );
    }

    #[test]
    fn from_function_examples() {
        assert_eq!(
            FinKernel::from_function(&[0, 1, 2], 3).unwrap(),
            FinKernel::identity(3)
        );
        assert_eq!(
            FinKernel::from_function(&[0, 0], 1).unwrap(),
            FinKernel::discard(2)
        );
        let swap = FinKernel::from_function(&[1, 0], 2).unwrap();
        assert_eq!(swap.entries(), &[zero(), one(), one(), zero()]);
        assert!(swap.is_deterministic());
        assert!(FinKernel::from_function(&[2], 2).is_err());
    }

    #[test]
    fn swap_reindexes_pairs() {
        // (a, b) in 2 x 3 goes to (b, a) in 3 x 2
        let s = FinKernel::swap(2, 3);
        let h = s.as_function().unwrap();
        for a in 0..2 {
            for b in 0..3 {
                assert_eq!(h[a * 3 + b], b * 2 + a);
            }
        }
        assert_eq!(
            s.then(&FinKernel::swap(3, 2)).unwrap(),
            FinKernel::identity(6)
        );
    }

    #[test]
    fn determinism_examples() {
        assert!(FinKernel::identity(3).is_deterministic());
        let half = k(2, &[&[(1, 2), (1, 2)]]);
        assert!(!half.is_deterministic());
        let lhs = half.then(&FinKernel::copy(2)).unwrap();
        let rhs = FinKernel::copy(1).then(&half.tensor(&half)).unwrap();
        assert_eq!(lhs, k(4, &[&[(1, 2), (0, 1), (0, 1), (1, 2)]]));
        assert_eq!(rhs, k(4, &[&[(1, 4), (1, 4), (1, 4), (1, 4)]]));
        assert!(!half.satisfies_copy_equation());
        assert!(FinKernel::swap(2, 2).satisfies_copy_equation());
    }

    #[test]
    fn conditional_uniform() {
        let p = k(4, &[&[(1, 4), (1, 4), (1, 4), (1, 4)]]);
        let cond = conditional_fin(&p, 2, 2).unwrap();
        assert_eq!(cond, k(2, &[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]));
        let marginal = first_marginal(&p, 2, 2).unwrap();
        assert_eq!(recompose(&marginal, &cond).unwrap(), p);
    }

    #[test]
    fn conditional_point_mass_uses_fallback() {
        // point mass at (y, z) = (0, 1)
        let p = k(4, &[&[(0, 1), (1, 1), (0, 1), (0, 1)]]);
        let cond = conditional_fin(&p, 2, 2).unwrap();
        assert_eq!(cond, k(2, &[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]));
        let marginal = first_marginal(&p, 2, 2).unwrap();
        assert_eq!(recompose(&marginal, &cond).unwrap(), p);
        assert!(conditional_fin(&p, 3, 2).is_err());
    }

    #[test]
    fn conditional_with_nontrivial_domain() {
        let p = k(
            4,
            &[
                &[(1, 8), (3, 8), (1, 4), (1, 4)],
                &[(0, 1), (0, 1), (1, 3), (2, 3)],
            ],
        );
        let cond = conditional_fin(&p, 2, 2).unwrap();
        assert_eq!(cond.row(0), &[ratio(1, 4), ratio(3, 4)]);
        assert_eq!(cond.row(2), &[one(), zero()]);
        let marginal = first_marginal(&p, 2, 2).unwrap();
        assert_eq!(recompose(&marginal, &cond).unwrap(), p);
    }

    #[test]
    fn causality_examples() {
        let f = FinKernel::from_function(&[0], 2).unwrap();
        let g = FinKernel::identity(2);
        let h1 = k(2, &[&[(1, 2), (1, 2)], &[(1, 1), (0, 1)]]);
        let h2 = k(2, &[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]]);

        let same = causality_instance(&f, &g, &h1, &h1).unwrap();
        assert_eq!(
            same,
            CausalityOutcome {
                hypothesis: true,
                conclusion: true
            }
        );

        // h1, h2 differ only at c = 1, which carries no mass
        let zero_mass = causality_instance(&f, &g, &h1, &h2).unwrap();
        assert_eq!(
            zero_mass,
            CausalityOutcome {
                hypothesis: true,
                conclusion: true
            }
        );

        let f = FinKernel::from_function(&[1], 2).unwrap();
        let positive = causality_instance(&f, &g, &h1, &h2).unwrap();
        assert!(!positive.hypothesis);
        assert!(positive.holds());

        assert!(causality_instance(&f, &FinKernel::identity(3), &h1, &h2).is_err());
    }

    #[test]
    fn render_format() {
        let f = k(2, &[&[(1, 3), (2, 3)], &[(1, 1), (0, 1)]]);
        assert_eq!(f.render(), "1/3 2/3\n1 0\n");
    }
}
