//! Countably based Stone spaces as sequential inverse systems of finite sets.
//!
//! Level `n` is a finite set `X_n = {0, .., size(n) - 1}` and
//! `connect(n, -)` is a surjection `X_{n+1} -> X_n`. Points are compatible
//! threads through the levels and clopens are cylinders: a subset of one
//! level, standing for its preimage in the limit.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// A sequential inverse system with surjective connecting maps.
///
/// Finite products are kept flat and drop unit factors, so `(X x Y) x Z`,
/// `X x (Y x Z)` and `X x 1` all have the same presentation as their
/// row-major flattening.
#[derive(Clone, PartialEq, Eq)]
pub struct InverseSystem(Arc<Node>);

#[derive(Debug, PartialEq, Eq)]
enum Node {
    Constant(usize),
    BinaryPrefix,
    Explicit(Tables),
    Product(Vec<InverseSystem>),
    /// Countable product of a periodic family: factor `a` is `family[a % len]`.
    Countable(Vec<InverseSystem>),
}

/// Explicit level data up to a declared depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tables {
    sizes: Vec<usize>,
    connects: Vec<Vec<usize>>,
}

impl InverseSystem {
    /// The finite set of size `n`, as a system with identity connecting maps.
    pub fn constant(n: usize) -> Self {
        InverseSystem(Arc::new(Node::Constant(n)))
    }

    /// The monoidal unit, a single point.
    pub fn unit() -> Self {
        Self::constant(1)
    }

    /// `X_n = 2^n` bit strings, big-endian, truncated by dropping the last bit.
    pub fn binary_prefix() -> Self {
        InverseSystem(Arc::new(Node::BinaryPrefix))
    }

    /// Explicit tables: `sizes[n] = |X_n|` and `connects[n]` maps
    /// `X_{n+1} -> X_n`. The declared depth is `sizes.len() - 1`.
    pub fn explicit(sizes: Vec<usize>, connects: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::validation("explicit system needs at least level 0"));
        }
        if connects.len() + 1 != sizes.len() {
            return Err(Error::validation(format!(
                "{} levels need {} connecting maps, got {}",
                sizes.len(),
                sizes.len() - 1,
                connects.len()
            )));
        }
        for (n, map) in connects.iter().enumerate() {
            if map.len() != sizes[n + 1] {
                return Err(Error::validation(format!(
                    "connect {n} has {} entries, level {} has size {}",
                    map.len(),
                    n + 1,
                    sizes[n + 1]
                )));
            }
            let mut hit = vec![false; sizes[n]];
            for &y in map {
                if y >= sizes[n] {
                    return Err(Error::validation(format!(
                        "connect {n} value {y} out of range 0..{}",
                        sizes[n]
                    )));
                }
                hit[y] = true;
            }
            if let Some(missed) = hit.iter().position(|h| !h) {
                return Err(Error::validation(format!(
                    "connect {n} is not surjective: {missed} has no preimage"
                )));
            }
        }
        Ok(InverseSystem(Arc::new(Node::Explicit(Tables {
            sizes,
            connects,
        }))))
    }

    /// Finite product; nested products are flattened and unit factors dropped.
    pub fn product(systems: impl IntoIterator<Item = InverseSystem>) -> Self {
        let mut flat = Vec::new();
        for sys in systems {
            match &*sys.0 {
                Node::Product(fs) => flat.extend(fs.iter().cloned()),
                Node::Constant(1) => {}
                _ => flat.push(sys),
            }
        }
        match flat.len() {
            0 => Self::unit(),
            1 => flat.pop().unwrap(),
            _ => InverseSystem(Arc::new(Node::Product(flat))),
        }
    }

    pub fn pair(a: &InverseSystem, b: &InverseSystem) -> Self {
        Self::product([a.clone(), b.clone()])
    }

    /// Countable product of the periodic family `family[a % family.len()]`,
    /// truncated diagonally: level `n` is the product of factors `a <= n`
    /// at their level `n`.
    pub fn countable_product(family: Vec<InverseSystem>) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::validation(
                "countable product needs a nonempty family",
            ));
        }
        Ok(InverseSystem(Arc::new(Node::Countable(family))))
    }

    /// Largest level that can be queried, if bounded.
    pub fn depth_limit(&self) -> Option<usize> {
        match &*self.0 {
            Node::Constant(_) | Node::BinaryPrefix => None,
            Node::Explicit(t) => Some(t.sizes.len() - 1),
            Node::Product(fs) | Node::Countable(fs) => {
                fs.iter().filter_map(|f| f.depth_limit()).min()
            }
        }
    }

    fn check_depth(&self, n: usize) -> Result<()> {
        match self.depth_limit() {
            Some(limit) if n > limit => Err(Error::DepthExceeded {
                requested: n,
                available: limit,
            }),
            _ => Ok(()),
        }
    }

    pub fn level_size(&self, n: usize) -> Result<usize> {
        self.check_depth(n)?;
        match &*self.0 {
            Node::Constant(k) => Ok(*k),
            Node::BinaryPrefix => 1usize
                .checked_shl(n as u32)
                .filter(|_| n < usize::BITS as usize)
                .ok_or_else(|| too_large(n)),
            Node::Explicit(t) => Ok(t.sizes[n]),
            Node::Product(fs) => checked_product(fs.iter().map(|f| f.level_size(n)), n),
            Node::Countable(fs) => {
                checked_product((0..=n).map(|a| fs[a % fs.len()].level_size(n)), n)
            }
        }
    }

    /// The connecting map `X_{n+1} -> X_n` applied to `x`.
    pub fn connect(&self, n: usize, x: usize) -> Result<usize> {
        self.check_depth(n + 1)?;
        match &*self.0 {
            Node::Constant(_) => Ok(x),
            Node::BinaryPrefix => Ok(x >> 1),
            Node::Explicit(t) => Ok(t.connects[n][x]),
            Node::Product(fs) => {
                let sizes = fs
                    .iter()
                    .map(|f| f.level_size(n + 1))
                    .collect::<Result<Vec<_>>>()?;
                let coords = decode(x, &sizes);
                let mapped = fs
                    .iter()
                    .zip(&coords)
                    .map(|(f, &c)| f.connect(n, c))
                    .collect::<Result<Vec<_>>>()?;
                let lower = fs
                    .iter()
                    .map(|f| f.level_size(n))
                    .collect::<Result<Vec<_>>>()?;
                Ok(encode(&mapped, &lower))
            }
            Node::Countable(fs) => {
                let factor = |a: usize| &fs[a % fs.len()];
                let sizes = (0..=n + 1)
                    .map(|a| factor(a).level_size(n + 1))
                    .collect::<Result<Vec<_>>>()?;
                let coords = decode(x, &sizes);
                let mapped = (0..=n)
                    .map(|a| factor(a).connect(n, coords[a]))
                    .collect::<Result<Vec<_>>>()?;
                let lower = (0..=n)
                    .map(|a| factor(a).level_size(n))
                    .collect::<Result<Vec<_>>>()?;
                Ok(encode(&mapped, &lower))
            }
        }
    }

    /// Composite of connecting maps `X_m -> X_n` applied to one element.
    pub fn project(&self, m: usize, n: usize, x: usize) -> Result<usize> {
        if n > m {
            return Err(Error::validation(format!(
                "cannot project from level {m} up to level {n}"
            )));
        }
        let mut x = x;
        for level in (n..m).rev() {
            x = self.connect(level, x)?;
        }
        Ok(x)
    }

    /// The whole projection `X_m -> X_n` as a table.
    pub fn projection(&self, m: usize, n: usize) -> Result<Vec<usize>> {
        if n > m {
            return Err(Error::validation(format!(
                "cannot project from level {m} up to level {n}"
            )));
        }
        let mut table: Vec<usize> = (0..self.level_size(m)?).collect();
        for level in (n..m).rev() {
            for x in table.iter_mut() {
                *x = self.connect(level, *x)?;
            }
        }
        Ok(table)
    }

    /// Factors of a finite product, or `[self]`.
    pub fn factors(&self) -> Vec<InverseSystem> {
        match &*self.0 {
            Node::Product(fs) => fs.clone(),
            _ => vec![self.clone()],
        }
    }

    /// Some(|X|) if every level is the same finite set with identity connects.
    pub fn constant_size(&self) -> Option<usize> {
        match &*self.0 {
            Node::Constant(k) => Some(*k),
            Node::Product(fs) => fs
                .iter()
                .map(|f| f.constant_size())
                .try_fold(1usize, |acc, s| s.and_then(|s| acc.checked_mul(s))),
            _ => None,
        }
    }

    pub fn is_binary_prefix(&self) -> bool {
        matches!(&*self.0, Node::BinaryPrefix)
    }

    /// The periodic family of a countable product.
    pub fn countable_family(&self) -> Option<&[InverseSystem]> {
        match &*self.0 {
            Node::Countable(fs) => Some(fs),
            _ => None,
        }
    }

    /// Number of factors visible at `level`: finite products always show all
    /// of theirs, countable products show factors `0..=level`.
    pub fn factor_count_at(&self, level: usize) -> usize {
        match &*self.0 {
            Node::Product(fs) => fs.len(),
            Node::Countable(_) => level + 1,
            _ => 1,
        }
    }

    /// The system of factor `index` of a finite or countable product.
    pub fn factor(&self, index: usize) -> Option<InverseSystem> {
        match &*self.0 {
            Node::Product(fs) => fs.get(index).cloned(),
            Node::Countable(fs) => Some(fs[index % fs.len()].clone()),
            _ => (index == 0).then(|| self.clone()),
        }
    }

    /// Splits an element of level `n` into factor coordinates at level `n`.
    pub fn coordinates(&self, n: usize, x: usize) -> Result<Vec<usize>> {
        let sizes = self.factor_sizes(n)?;
        Ok(decode(x, &sizes))
    }

    /// Inverse of [`InverseSystem::coordinates`].
    pub fn from_coordinates(&self, n: usize, coords: &[usize]) -> Result<usize> {
        let sizes = self.factor_sizes(n)?;
        if coords.len() != sizes.len() || coords.iter().zip(&sizes).any(|(c, s)| c >= s) {
            return Err(Error::validation("coordinates do not fit the level"));
        }
        Ok(encode(coords, &sizes))
    }

    fn factor_sizes(&self, n: usize) -> Result<Vec<usize>> {
        (0..self.factor_count_at(n))
            .map(|a| self.factor(a).expect("factor in range").level_size(n))
            .collect()
    }

    /// Checks the surjectivity invariant for every connecting map up to `depth`.
    pub fn check_surjective(&self, depth: usize) -> Result<bool> {
        for n in 0..depth {
            let mut hit = vec![false; self.level_size(n)?];
            for x in 0..self.level_size(n + 1)? {
                hit[self.connect(n, x)?] = true;
            }
            if hit.contains(&false) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Snapshot of levels `0..=depth` as explicit tables.
    pub fn tables(&self, depth: usize) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
        let sizes = (0..=depth)
            .map(|n| self.level_size(n))
            .collect::<Result<Vec<_>>>()?;
        let connects = (0..depth)
            .map(|n| (0..sizes[n + 1]).map(|x| self.connect(n, x)).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok((sizes, connects))
    }
}

fn too_large(n: usize) -> Error {
    Error::validation(format!("level {n} is too large to enumerate"))
}

fn checked_product(sizes: impl Iterator<Item = Result<usize>>, n: usize) -> Result<usize> {
    let mut acc = 1usize;
    for s in sizes {
        acc = acc.checked_mul(s?).ok_or_else(|| too_large(n))?;
    }
    Ok(acc)
}

/// Row-major decoding, first coordinate most significant.
pub(crate) fn decode(mut x: usize, sizes: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; sizes.len()];
    for (c, &s) in coords.iter_mut().zip(sizes).rev() {
        *c = x % s;
        x /= s;
    }
    coords
}

pub(crate) fn encode(coords: &[usize], sizes: &[usize]) -> usize {
    coords
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&c, &s)| acc * s + c)
}

impl fmt::Debug for InverseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for InverseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, fs: &[InverseSystem]| {
            write!(f, "{name}(")?;
            for (i, s) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, ")")
        };
        match &*self.0 {
            Node::Constant(k) => write!(f, "constant({k})"),
            Node::BinaryPrefix => write!(f, "binary_prefix"),
            Node::Explicit(t) => write!(f, "explicit{:?}", t.sizes),
            Node::Product(fs) => list(f, "product", fs),
            Node::Countable(fs) => list(f, "countable", fs),
        }
    }
}

pub fn projection(sys: &InverseSystem, m: usize, n: usize) -> Result<Vec<usize>> {
    sys.projection(m, n)
}

pub fn product(systems: impl IntoIterator<Item = InverseSystem>) -> InverseSystem {
    InverseSystem::product(systems)
}

type Thread = dyn Fn(usize) -> Result<usize> + Send + Sync;

/// A compatible thread: one element per level.
#[derive(Clone)]
pub struct Point {
    system: InverseSystem,
    at: Arc<Thread>,
}

impl Point {
    /// Wraps a producer; compatibility is checked by [`Point::check_compatible`].
    pub fn from_fn(
        system: InverseSystem,
        at: impl Fn(usize) -> Result<usize> + Send + Sync + 'static,
    ) -> Self {
        Point {
            system,
            at: Arc::new(at),
        }
    }

    pub fn system(&self) -> &InverseSystem {
        &self.system
    }

    pub fn at(&self, n: usize) -> Result<usize> {
        (self.at)(n)
    }

    /// `connect_n(point(n + 1)) = point(n)` for all `n < depth`.
    pub fn check_compatible(&self, depth: usize) -> Result<bool> {
        for n in 0..depth {
            if self.system.connect(n, self.at(n + 1)?)? != self.at(n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({})", self.system)
    }
}

/// The thread starting at `start` that always takes the least preimage.
pub fn least_thread(sys: &InverseSystem, start: usize) -> Result<Point> {
    if start >= sys.level_size(0)? {
        return Err(Error::validation(format!(
            "start {start} is not an element of level 0"
        )));
    }
    let system = sys.clone();
    let memo = Mutex::new(vec![start]);
    Ok(Point::from_fn(sys.clone(), move |n| {
        let mut memo = memo.lock().expect("thread memo poisoned");
        while memo.len() <= n {
            let level = memo.len() - 1;
            let below = memo[level];
            let size = system.level_size(level + 1)?;
            let mut found = None;
            for x in 0..size {
                if system.connect(level, x)? == below {
                    found = Some(x);
                    break;
                }
            }
            let x = found
                .ok_or_else(|| Error::validation(format!("connect {level} is not surjective")))?;
            memo.push(x);
        }
        Ok(memo[n])
    }))
}

/// A cylinder set: the preimage in the limit of a subset of one level.
#[derive(Debug, Clone)]
pub struct Clopen {
    system: InverseSystem,
    level: usize,
    subset: BTreeSet<usize>,
}

impl Clopen {
    pub fn new(
        system: &InverseSystem,
        level: usize,
        subset: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let size = system.level_size(level)?;
        let subset: BTreeSet<usize> = subset.into_iter().collect();
        if let Some(&bad) = subset.iter().find(|&&x| x >= size) {
            return Err(Error::validation(format!(
                "element {bad} is not in level {level} of size {size}"
            )));
        }
        Ok(Clopen {
            system: system.clone(),
            level,
            subset,
        })
    }

    pub fn whole(system: &InverseSystem) -> Result<Self> {
        Self::new(system, 0, 0..system.level_size(0)?)
    }

    pub fn empty(system: &InverseSystem) -> Self {
        Clopen {
            system: system.clone(),
            level: 0,
            subset: BTreeSet::new(),
        }
    }

    pub fn system(&self) -> &InverseSystem {
        &self.system
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.subset
    }

    /// The same set presented at level `m >= self.level`.
    pub fn refine(&self, m: usize) -> Result<Clopen> {
        if m < self.level {
            return Err(Error::validation(format!(
                "cannot refine level {} down to {m}",
                self.level
            )));
        }
        let table = self.system.projection(m, self.level)?;
        let subset = table
            .iter()
            .enumerate()
            .filter(|(_, y)| self.subset.contains(y))
            .map(|(x, _)| x)
            .collect();
        Ok(Clopen {
            system: self.system.clone(),
            level: m,
            subset,
        })
    }

    fn aligned(&self, other: &Clopen) -> Result<(Clopen, Clopen)> {
        if self.system != other.system {
            return Err(Error::SystemMismatch(format!(
                "clopens on {} and {}",
                self.system, other.system
            )));
        }
        let m = self.level.max(other.level);
        Ok((self.refine(m)?, other.refine(m)?))
    }

    pub fn union(&self, other: &Clopen) -> Result<Clopen> {
        let (a, b) = self.aligned(other)?;
        let subset = a.subset.union(&b.subset).copied().collect();
        Ok(Clopen { subset, ..a })
    }

    pub fn intersection(&self, other: &Clopen) -> Result<Clopen> {
        let (a, b) = self.aligned(other)?;
        let subset = a.subset.intersection(&b.subset).copied().collect();
        Ok(Clopen { subset, ..a })
    }

    pub fn complement(&self) -> Result<Clopen> {
        let size = self.system.level_size(self.level)?;
        let subset = (0..size).filter(|x| !self.subset.contains(x)).collect();
        Ok(Clopen {
            system: self.system.clone(),
            level: self.level,
            subset,
        })
    }

    /// Equality as subsets of the limit, after refining to a common level.
    pub fn same_set(&self, other: &Clopen) -> Result<bool> {
        let (a, b) = self.aligned(other)?;
        Ok(a.subset == b.subset)
    }

    pub fn contains(&self, point: &Point) -> Result<bool> {
        if point.system() != &self.system {
            return Err(Error::SystemMismatch("point on a different system".into()));
        }
        Ok(self.subset.contains(&point.at(self.level)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> InverseSystem {
        // 2 <- 3 <- 5
        InverseSystem::explicit(vec![2, 3, 5], vec![vec![0, 1, 1], vec![0, 0, 1, 2, 2]]).unwrap()
    }

    #[test]
    fn projection_examples() {
        let bits = InverseSystem::binary_prefix();
        assert_eq!(bits.projection(2, 2).unwrap(), vec![0, 1, 2, 3]);
        // 3 bits down to 1 bit keeps the leading bit
        assert_eq!(bits.projection(3, 1).unwrap(), vec![0, 0, 0, 0, 1, 1, 1, 1]);
        let c = InverseSystem::constant(3);
        assert_eq!(c.projection(5, 1).unwrap(), vec![0, 1, 2]);
        assert!(matches!(bits.projection(1, 3), Err(Error::Validation(_))));
    }

    #[test]
    fn projection_is_functorial() {
        for sys in [InverseSystem::binary_prefix(), two_level()] {
            for m in 0..=2 {
                for n in 0..=m {
                    for k in 0..=n {
                        let direct = sys.projection(m, k).unwrap();
                        let mn = sys.projection(m, n).unwrap();
                        let nk = sys.projection(n, k).unwrap();
                        let via: Vec<usize> = mn.iter().map(|&y| nk[y]).collect();
                        assert_eq!(direct, via);
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_validation() {
        assert!(InverseSystem::explicit(vec![2, 2], vec![vec![0, 0]]).is_err());
        assert!(InverseSystem::explicit(vec![2, 2], vec![vec![0, 2]]).is_err());
        assert!(InverseSystem::explicit(vec![2, 3], vec![vec![0, 1]]).is_err());
        assert!(InverseSystem::explicit(vec![], vec![]).is_err());
        let sys = two_level();
        assert_eq!(sys.depth_limit(), Some(2));
        assert!(matches!(
            sys.level_size(3),
            Err(Error::DepthExceeded {
                requested: 3,
                available: 2
            })
        ));
        assert!(sys.check_surjective(2).unwrap());
    }

    #[test]
    fn product_examples() {
        let c2 = InverseSystem::constant(2);
        let p = InverseSystem::pair(&c2, &c2);
        assert_eq!(p.level_size(0).unwrap(), 4);
        assert_eq!(p.level_size(7).unwrap(), 4);
        assert_eq!(p.constant_size(), Some(4));

        let bits = InverseSystem::binary_prefix();
        let bb = InverseSystem::pair(&bits, &bits);
        for n in 0..5 {
            assert_eq!(bb.level_size(n).unwrap(), 4usize.pow(n as u32));
        }
        assert!(bb.check_surjective(4).unwrap());

        let countable = InverseSystem::countable_product(vec![c2.clone()]).unwrap();
        for n in 0..6 {
            assert_eq!(countable.level_size(n).unwrap(), 1 << (n + 1));
        }
        assert!(countable.check_surjective(5).unwrap());
    }

    #[test]
    fn product_normalizes() {
        let a = InverseSystem::constant(2);
        let b = InverseSystem::binary_prefix();
        let c = two_level();
        let left = InverseSystem::pair(&InverseSystem::pair(&a, &b), &c);
        let right = InverseSystem::pair(&a, &InverseSystem::pair(&b, &c));
        assert_eq!(left, right);
        assert_eq!(InverseSystem::pair(&b, &InverseSystem::unit()), b);
        assert_eq!(InverseSystem::product([b.clone()]), b);
        assert_eq!(InverseSystem::product([]), InverseSystem::unit());
    }

    #[test]
    fn product_squares_commute() {
        let sys = InverseSystem::product([
            InverseSystem::binary_prefix(),
            two_level(),
            InverseSystem::constant(3),
        ]);
        for n in 0..2 {
            for x in 0..sys.level_size(n + 1).unwrap() {
                let coords = sys.coordinates(n + 1, x).unwrap();
                let down = sys.coordinates(n, sys.connect(n, x).unwrap()).unwrap();
                for (a, f) in sys.factors().iter().enumerate() {
                    assert_eq!(f.connect(n, coords[a]).unwrap(), down[a]);
                }
            }
        }
    }

    #[test]
    fn countable_connect_drops_new_factor() {
        let sys = InverseSystem::countable_product(vec![InverseSystem::binary_prefix()]).unwrap();
        // level 1: factors 0, 1 each with 2 elements; level 2: factors 0..=2 with 4
        let x = sys.from_coordinates(2, &[3, 2, 1]).unwrap();
        let y = sys.connect(1, x).unwrap();
        assert_eq!(sys.coordinates(1, y).unwrap(), vec![1, 1]);
    }

    #[test]
    fn least_thread_examples() {
        let c = InverseSystem::constant(3);
        let p = least_thread(&c, 2).unwrap();
        assert!((0..10).all(|n| p.at(n).unwrap() == 2));

        let bits = InverseSystem::binary_prefix();
        let zeros = least_thread(&bits, 0).unwrap();
        for n in 0..8 {
            assert_eq!(zeros.at(n).unwrap(), 0);
        }
        assert!(zeros.check_compatible(8).unwrap());

        let t = least_thread(&two_level(), 1).unwrap();
        assert_eq!(t.at(1).unwrap(), 1);
        assert_eq!(t.at(2).unwrap(), 2);
        assert!(t.check_compatible(2).unwrap());
        assert!(least_thread(&c, 3).is_err());
    }

    #[test]
    fn clopen_examples() {
        let bits = InverseSystem::binary_prefix();
        let a = Clopen::new(&bits, 1, [1]).unwrap();
        let whole = a.union(&a.complement().unwrap()).unwrap();
        assert!(whole.same_set(&Clopen::whole(&bits).unwrap()).unwrap());

        // bit0 = 1 is {1} at level 1; bit1 = 0 is {00, 10} at level 2
        let bit1_zero = Clopen::new(&bits, 2, [0, 2]).unwrap();
        let meet = a.intersection(&bit1_zero).unwrap();
        assert_eq!(meet.level(), 2);
        assert_eq!(meet.subset().iter().copied().collect::<Vec<_>>(), vec![2]);

        let at3 = a.refine(3).unwrap();
        assert_eq!(at3.subset().len(), 4);
        assert!(a.same_set(&at3).unwrap());
        assert!(!a.same_set(&bit1_zero).unwrap());

        let ones = least_thread(&bits, 0).unwrap();
        assert!(!a.contains(&ones).unwrap());
        assert!(bit1_zero.contains(&ones).unwrap());

        let other = Clopen::whole(&InverseSystem::constant(2)).unwrap();
        assert!(matches!(a.union(&other), Err(Error::SystemMismatch(_))));
        assert!(Clopen::new(&bits, 1, [2]).is_err());
    }
}
