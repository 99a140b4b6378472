//! Seeded random generators and exhaustive enumerations used by the law
//! suites and tests.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed fixes
//! every generated value across runs and platforms.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::finker::FinKernel;
use crate::proker::{projection_kernel, ProKernel};
use crate::rational::{ratio, Rational};
use crate::stone::InverseSystem;

pub type GenRng = ChaCha8Rng;

/// Largest denominator drawn for random rows.
pub const MAX_DENOMINATOR: u32 = 16;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random composition of `total` into `parts` nonnegative parts
/// (stars and bars).
pub fn composition(rng: &mut GenRng, total: u32, parts: usize) -> Vec<u32> {
    assert!(parts > 0, "cannot split into zero parts");
    let slots = total as usize + parts - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, parts - 1).into_vec();
    bars.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0usize;
    for (k, &b) in bars.iter().enumerate() {
        // stars between consecutive bars
        let start = if k == 0 { 0 } else { prev + 1 };
        out.push((b - start) as u32);
        prev = b;
    }
    let start = if bars.is_empty() { 0 } else { prev + 1 };
    out.push((slots - start) as u32);
    out
}

/// A random probability vector of length `m >= 1`: pick a denominator
/// `d <= 16`, then a uniform composition of `d` into `m` parts.
pub fn random_row(rng: &mut GenRng, m: usize) -> Vec<Rational> {
    let d = rng.random_range(1..=MAX_DENOMINATOR);
    composition(rng, d, m)
        .into_iter()
        .map(|c| ratio(c as i64, d as i64))
        .collect()
}

/// A random kernel `n -> m`; `m == 0` forces `n == 0`.
pub fn random_kernel(rng: &mut GenRng, n: usize, m: usize) -> FinKernel {
    if m == 0 {
        return FinKernel::new(0, 0, vec![]).expect("empty kernel");
    }
    let entries = (0..n).flat_map(|_| random_row(rng, m)).collect();
    FinKernel::new(n, m, entries).expect("random rows are stochastic")
}

pub fn random_function(rng: &mut GenRng, n: usize, m: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..m)).collect()
}

pub fn random_deterministic(rng: &mut GenRng, n: usize, m: usize) -> FinKernel {
    if m == 0 {
        return FinKernel::new(0, 0, vec![]).expect("empty kernel");
    }
    FinKernel::from_function(&random_function(rng, n, m), m).expect("in range")
}

/// All distinct probability vectors of length `m` whose entries share a
/// denominator `d <= max_den`.
pub fn enumerate_rows(m: usize, max_den: u32) -> Vec<Vec<Rational>> {
    if m == 0 {
        return vec![];
    }
    let mut rows = BTreeSet::new();
    for d in 1..=max_den {
        let mut stack = vec![(Vec::new(), d)];
        while let Some((prefix, left)) = stack.pop() {
            if prefix.len() + 1 == m {
                let mut row: Vec<Rational> = prefix
                    .iter()
                    .map(|&c: &u32| ratio(c as i64, d as i64))
                    .collect();
                row.push(ratio(left as i64, d as i64));
                rows.insert(row);
                continue;
            }
            for c in 0..=left {
                let mut next = prefix.clone();
                next.push(c);
                stack.push((next, left - c));
            }
        }
    }
    rows.into_iter().collect()
}

/// Every kernel `n -> m` built from the rows of [`enumerate_rows`].
pub fn enumerate_kernels(n: usize, m: usize, max_den: u32) -> Vec<FinKernel> {
    if m == 0 {
        return if n == 0 {
            vec![FinKernel::new(0, 0, vec![]).expect("empty kernel")]
        } else {
            vec![]
        };
    }
    let rows = enumerate_rows(m, max_den);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let entries = idx.iter().flat_map(|&r| rows[r].iter().cloned()).collect();
        out.push(FinKernel::new(n, m, entries).expect("enumerated rows are stochastic"));
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < rows.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A random explicit system with `depth + 1` levels, nondecreasing sizes
/// bounded by `max_size`, and random surjective connecting maps.
pub fn random_system(rng: &mut GenRng, depth: usize, max_size: usize) -> InverseSystem {
    let max_size = max_size.max(1);
    let mut sizes = vec![rng.random_range(1..=max_size)];
    let mut connects = Vec::with_capacity(depth);
    for n in 0..depth {
        let below = sizes[n];
        let above = rng.random_range(below..=max_size);
        let mut map: Vec<usize> = (0..below).collect();
        map.extend((below..above).map(|_| rng.random_range(0..below)));
        map.shuffle(rng);
        sizes.push(above);
        connects.push(map);
    }
    InverseSystem::explicit(sizes, connects).expect("generated system is valid")
}

/// How lifts split mass between levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftStyle {
    /// Split each parent mass by a random composition over its fiber.
    Random,
    /// Put each parent mass on one random element of its fiber.
    Deterministic,
}

/// Pushes one level row up along a surjection: each parent's mass is split
/// over its fiber.
fn lift_row(
    rng: &mut GenRng,
    base: &[Rational],
    fibers: &[Vec<usize>],
    above: usize,
    style: LiftStyle,
) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); above];
    for (y, mass) in base.iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        let fiber = &fibers[y];
        match style {
            LiftStyle::Deterministic => {
                row[*fiber.choose(rng).expect("surjective")] = mass.clone();
            }
            LiftStyle::Random => {
                for (x, share) in fiber.iter().zip(random_row(rng, fiber.len())) {
                    row[*x] = mass * share;
                }
            }
        }
    }
    row
}

fn fibers(sys: &InverseSystem, n: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); sys.level_size(n)?];
    for x in 0..sys.level_size(n + 1)? {
        out[sys.connect(n, x)?].push(x);
    }
    Ok(out)
}

/// A random compatible pro-kernel with explicit levels `0..=depth`.
///
/// Level 0 is drawn at random; each further level lifts the previous one so
/// the compatibility square holds by construction. The domain schedule is
/// `i(j) = min(j + shift, limit)` with `shift` in `{0, 1}`.
pub fn random_prokernel(
    rng: &mut GenRng,
    dom: &InverseSystem,
    cod: &InverseSystem,
    depth: usize,
    style: LiftStyle,
) -> Result<ProKernel> {
    random_prokernel_avoiding(rng, dom, cod, depth, style, &BTreeSet::new())
}

/// As [`random_prokernel`], but level 0 puts no mass on the codomain
/// elements in `avoid` (unless that would leave nothing), so every higher
/// level puts no mass on their preimages either.
pub fn random_prokernel_avoiding(
    rng: &mut GenRng,
    dom: &InverseSystem,
    cod: &InverseSystem,
    depth: usize,
    style: LiftStyle,
    avoid: &BTreeSet<usize>,
) -> Result<ProKernel> {
    let limit = dom.depth_limit().unwrap_or(usize::MAX);
    let shift = rng.random_range(0..=1usize);
    let schedule = |j: usize| (j + shift).min(limit);

    let i0 = schedule(0);
    let (rows, cols) = (dom.level_size(i0)?, cod.level_size(0)?);
    let allowed: Vec<usize> = (0..cols).filter(|y| !avoid.contains(y)).collect();
    let first = if allowed.is_empty() || rows == 0 {
        match style {
            LiftStyle::Random => random_kernel(rng, rows, cols),
            LiftStyle::Deterministic => random_deterministic(rng, rows, cols),
        }
    } else {
        let narrow = match style {
            LiftStyle::Random => random_kernel(rng, rows, allowed.len()),
            LiftStyle::Deterministic => random_deterministic(rng, rows, allowed.len()),
        };
        let spread = FinKernel::from_function(&allowed, cols)?;
        narrow.then(&spread)?
    };
    let mut levels = vec![(i0, first)];
    for j in 0..depth {
        let (prev_i, prev) = levels.last().expect("nonempty").clone();
        let i = schedule(j + 1);
        let pulled = projection_kernel(dom, i, prev_i)?.then(&prev)?;
        let fib = fibers(cod, j)?;
        let above = cod.level_size(j + 1)?;
        let entries: Vec<Rational> = (0..pulled.dom())
            .flat_map(|x| lift_row(rng, pulled.row(x), &fib, above, style))
            .collect();
        levels.push((i, FinKernel::new(pulled.dom(), above, entries)?));
    }
    ProKernel::from_levels(dom.clone(), cod.clone(), levels)
}

/// A random state on `cod` with `zero_fibers` forced: level-0 elements in
/// that set get no mass (when possible).
pub fn random_state(
    rng: &mut GenRng,
    cod: &InverseSystem,
    depth: usize,
    zero_fibers: &BTreeSet<usize>,
) -> Result<ProKernel> {
    let size0 = cod.level_size(0)?;
    let allowed: Vec<usize> = (0..size0).filter(|y| !zero_fibers.contains(y)).collect();
    let mut first = vec![Rational::zero(); size0];
    if allowed.is_empty() {
        first = random_row(rng, size0);
    } else {
        for (y, w) in allowed.iter().zip(random_row(rng, allowed.len())) {
            first[*y] = w;
        }
    }
    let mut rows = vec![first];
    for j in 0..depth {
        let fib = fibers(cod, j)?;
        let above = cod.level_size(j + 1)?;
        let row = lift_row(
            rng,
            rows.last().expect("nonempty"),
            &fib,
            above,
            LiftStyle::Random,
        );
        rows.push(row);
    }
    let levels = rows
        .into_iter()
        .map(|r| {
            let n = r.len();
            FinKernel::new(1, n, r).map(|k| (0, k))
        })
        .collect::<Result<Vec<_>>>()?;
    ProKernel::from_levels(InverseSystem::unit(), cod.clone(), levels)
}
