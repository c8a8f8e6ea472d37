//! Seeded generators for generic test data.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{extract_invariants, TwistedPolygon};
use crate::error::{Error, Result};
use crate::invariants::CoordVector;
use crate::reconstruct::build_polypoint;
use crate::scalar::{random_q, Q};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ATTEMPTS: usize = 64;

/// Random nonzero rationals with small height, avoiding `x_i x_{i+1} = 1`
/// for every cyclically adjacent pair so that no coordinate map has a pole.
pub fn generic_coords(rng: &mut Rng, n: usize, bound: i64) -> Result<CoordVector> {
    for _ in 0..ATTEMPTS {
        let x: Vec<Q> = (0..2 * n).map(|_| random_q(rng, bound)).collect();
        let v = CoordVector::new(x)?;
        let ok = (1..=2 * n as i64).all(|i| !(v.get(i) * v.get(i + 1)).is_one());
        if ok {
            return Ok(v);
        }
    }
    Err(Error::DegeneratePosition)
}

/// A twisted PolyPoint with random generic invariants, retried until the
/// reconstruction and its extraction succeed.
pub fn generic_polypoint(rng: &mut Rng, n: usize, bound: i64) -> Result<(CoordVector, TwistedPolygon)> {
    let mut last = Error::DegeneratePosition;
    for _ in 0..ATTEMPTS {
        let v = generic_coords(rng, n, bound)?;
        match build_polypoint(&v).and_then(|p| extract_invariants(&p).map(|_| p)) {
            Ok(p) => return Ok((v, p)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `count` distinct rationals in `(-bound, bound)`.
pub fn distinct_rationals(rng: &mut Rng, count: usize, bound: i64) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(count);
    while out.len() < count {
        let t = random_q(rng, bound);
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// A sequence of nonzero rationals, useful for the infinite-variable tables.
pub fn nonzero_sequence(rng: &mut Rng, len: usize, bound: i64) -> Vec<Q> {
    (0..len)
        .map(|_| {
            let mut t = random_q(rng, bound);
            while t.is_zero() {
                t = random_q(rng, bound);
            }
            t
        })
        .collect()
}
