//! Deterministic random number generation.
//!
//! Every stochastic routine in the crate takes an explicit seed and derives
//! independent streams from it, so replays are bit-identical and batches can
//! run in parallel without sharing generator state.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Generator for a (seed, stream) pair. Streams with the same seed are
/// statistically independent; the mapping is stable across runs.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Top-level generator for a seed (stream 0).
pub fn master_rng(seed: u64) -> ChaCha12Rng {
    stream_rng(seed, 0)
}

/// Sample an index from a categorical distribution given by `weights`
/// (assumed non-negative, summing to ~1).
pub fn sample_categorical(rng: &mut impl Rng, weights: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Uniform sample from the interior of the simplex (flat Dirichlet), mixed
/// with a little uniform mass so weights stay clear of the boundary.
pub fn sample_interior_simplex(rng: &mut impl Rng, dim: usize, uniform_mix: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..dim)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x = (1.0 - uniform_mix) * (*x / total) + uniform_mix / dim as f64;
    }
    w
}

/// Standard normal sample via Box-Muller (kept local for determinism).
pub fn sample_standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
