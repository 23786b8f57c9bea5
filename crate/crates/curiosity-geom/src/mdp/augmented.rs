//! The augmented counter chain.
//!
//! Pairing each state with a counter in `{0, ..., n}` turns the episodic
//! reset into an ordinary time-homogeneous chain: below the final counter
//! the pair steps with the agent-environment kernel and increments the
//! counter; at counter `n` it resets to a fresh start state with counter 0.
//! The chain has a unique stationary distribution whose state marginal is
//! exactly the episodic occupancy — which makes the construction a second,
//! independent route to the same object.
//!
//! The counter makes the chain periodic with period `n+1`, so plain power
//! iteration would orbit instead of converge; iterating the lazy kernel
//! `(I + M)/2` keeps the same stationary distribution and restores
//! convergence from any start.

use rand::Rng;

use crate::error::{Error, Result};
use crate::mdp::occupancy::{agent_env_kernel, row_times_matrix};
use crate::mdp::{FiniteMdp, Policy};
use crate::numeric::l1_distance;
use crate::simplex::Distribution;

/// Stationary distribution of the augmented chain, with diagnostics.
#[derive(Debug, Clone)]
pub struct AugmentedStationary {
    /// Distribution over (state, counter) pairs, indexed `counter * d + state`.
    pub joint: Distribution,
    /// Marginal over states after summing out the counter.
    pub state_marginal: Distribution,
    /// L1 residual of one exact (non-lazy) kernel application.
    pub invariance_residual: f64,
    pub iterations: usize,
}

const MAX_SWEEPS: usize = 1_000_000;
const RESIDUAL_TOL: f64 = 1e-12;

fn augmented_step(
    joint: &[f64],
    kernel: &[Vec<f64>],
    start: &[f64],
    d: usize,
    n: usize,
) -> Vec<f64> {
    let mut next = vec![0.0; joint.len()];
    for c in 0..=n {
        let level = &joint[c * d..(c + 1) * d];
        if c == n {
            // Terminal counter: reset into the start distribution.
            let mass: f64 = level.iter().sum();
            for (s, w) in start.iter().enumerate() {
                next[s] += mass * w;
            }
        } else {
            let moved = row_times_matrix(level, kernel);
            for (s, w) in moved.into_iter().enumerate() {
                next[(c + 1) * d + s] += w;
            }
        }
    }
    next
}

/// Power-iterate the augmented chain to its stationary distribution.
///
/// `init` seeds the iteration (uniform when absent); the result is
/// independent of it, which the uniqueness tests exercise directly.
pub fn augmented_stationary(
    mdp: &FiniteMdp,
    policy: &Policy,
    init: Option<Vec<f64>>,
) -> Result<AugmentedStationary> {
    let kernel = agent_env_kernel(mdp, policy)?;
    let d = mdp.num_states();
    let n = mdp.horizon() as usize;
    let size = d * (n + 1);
    let mut joint = match init {
        Some(v) => {
            crate::simplex::check_same_dim(v.len(), size)?;
            Distribution::normalized(v)?.into_weights()
        }
        None => vec![1.0 / size as f64; size],
    };
    let start = mdp.start().weights();

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < MAX_SWEEPS {
        iterations += 1;
        let stepped = augmented_step(&joint, &kernel, start, d, n);
        residual = l1_distance(&stepped, &joint);
        if residual <= RESIDUAL_TOL {
            break;
        }
        // Lazy update: averaging with the previous iterate removes the
        // period-(n+1) rotation of the counter while keeping fixed points.
        for (j, s) in joint.iter_mut().zip(&stepped) {
            *j = 0.5 * (*j + s);
        }
    }
    if residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            iterations,
            residual,
            tolerance: RESIDUAL_TOL,
        });
    }

    let invariance_residual = residual;
    let mut marginal = vec![0.0; d];
    for c in 0..=n {
        for s in 0..d {
            marginal[s] += joint[c * d + s];
        }
    }
    Ok(AugmentedStationary {
        joint: Distribution::normalized(joint)?,
        state_marginal: Distribution::normalized(marginal)?,
        invariance_residual,
        iterations,
    })
}

/// Random interior initialization for the uniqueness probes.
pub fn random_augmented_init(rng: &mut impl Rng, mdp: &FiniteMdp) -> Vec<f64> {
    let size = mdp.num_states() * (mdp.horizon() as usize + 1);
    crate::rng::sample_interior_simplex(rng, size, 0.0)
}
