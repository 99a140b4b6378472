//! Seeded ancestral sampling from the level distributions of a state.
//!
//! A draw picks a level-0 element, then walks up one level at a time,
//! choosing a child of the current element with probability
//! `p_{j+1}(child) / p_j(parent)`. Each choice is an exact inverse-CDF step:
//! a uniform `u = r / 2^64` with `r` from ChaCha8 is compared against exact
//! rational cumulative weights, so randomness is the only inexact input.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::proker::ProState;
use crate::rational::Rational;

/// Cumulative thresholds for one parent: `(child, cumulative conditional
/// weight)`, skipping zero-weight children.
type Table = Vec<(usize, Rational)>;

pub struct Sampler {
    depth: usize,
    /// `steps[0]` has one table (the level-0 distribution); `steps[j]` for
    /// `j >= 1` is indexed by the level-`j - 1` parent.
    steps: Vec<Vec<Table>>,
}

impl Sampler {
    pub fn new(state: &ProState, depth: usize) -> Result<Self> {
        if !state.is_state() {
            return Err(Error::validation(
                "sampling needs a state (domain is the unit)",
            ));
        }
        let sys = state.cod();
        let mut previous: Option<Vec<Rational>> = None;
        let mut steps = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            let dist = state.distribution_at(j)?;
            let tables = match &previous {
                None => vec![cumulative(dist.iter().cloned().enumerate())],
                Some(parent) => {
                    let mut children = vec![Vec::new(); parent.len()];
                    for (x, w) in dist.iter().enumerate() {
                        children[sys.connect(j - 1, x)?].push((x, w.clone()));
                    }
                    children
                        .into_iter()
                        .zip(parent)
                        .map(|(kids, mass)| {
                            if mass.is_zero() {
                                Vec::new()
                            } else {
                                cumulative(kids.into_iter().map(|(x, w)| (x, w / mass)))
                            }
                        })
                        .collect()
                }
            };
            steps.push(tables);
            previous = Some(dist);
        }
        Ok(Sampler { depth, steps })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// One draw: the level-`depth` element.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let mut current = 0;
        for (j, tables) in self.steps.iter().enumerate() {
            let table = if j == 0 { &tables[0] } else { &tables[current] };
            current = pick(table, rng.random::<u64>());
        }
        current
    }
}

fn cumulative(weights: impl Iterator<Item = (usize, Rational)>) -> Table {
    let mut acc = Rational::zero();
    let mut out = Vec::new();
    for (x, w) in weights {
        if w.is_zero() {
            continue;
        }
        acc += w;
        out.push((x, acc.clone()));
    }
    out
}

/// First entry whose cumulative weight exceeds `r / 2^64`.
fn pick(table: &Table, r: u64) -> usize {
    let u = Rational::new(BigInt::from(r), BigInt::from(1u8) << 64);
    table
        .iter()
        .find(|(_, c)| u < *c)
        .or(table.last())
        .map(|(x, _)| *x)
        .expect("a reachable parent has positive mass")
}

/// `count` draws from the level-`depth` distribution of `state`, reproducible
/// from `seed`.
pub fn sample(state: &ProState, depth: usize, seed: u64, count: usize) -> Result<Vec<usize>> {
    let sampler = Sampler::new(state, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.draw(&mut rng)).collect())
}
