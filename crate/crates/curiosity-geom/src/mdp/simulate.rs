//! Monte Carlo occupancies and returns.
//!
//! Episodes are simulated with one independent random stream per episode
//! derived from the master seed, so replays are bit-identical and episode
//! batches parallelize without shared state.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mdp::{FiniteMdp, Policy};
use crate::numeric::mean_and_stderr;
use crate::rng::{sample_categorical, stream_rng};
use crate::simplex::Distribution;

fn simulate_episode(
    mdp: &FiniteMdp,
    policy: &Policy,
    seed: u64,
    episode: u64,
    mut visit: impl FnMut(usize),
) {
    let mut rng = stream_rng(seed, episode);
    let mut state = sample_categorical(&mut rng, mdp.start().weights());
    visit(state);
    for _ in 0..mdp.horizon() {
        let action = sample_categorical(&mut rng, policy.row(state).weights());
        state = sample_categorical(&mut rng, mdp.transition(state, action).weights());
        visit(state);
    }
}

/// Normalized visit counts over `episodes * (horizon + 1)` sampled states.
pub fn empirical_occupancy(
    mdp: &FiniteMdp,
    policy: &Policy,
    episodes: u64,
    seed: u64,
) -> Result<Distribution> {
    policy.check_compatible(mdp)?;
    if episodes == 0 {
        return Err(Error::InvalidArgument("need at least one episode".into()));
    }
    let counts = (0..episodes)
        .into_par_iter()
        .fold(
            || vec![0u64; mdp.num_states()],
            |mut counts, ep| {
                simulate_episode(mdp, policy, seed, ep, |s| counts[s] += 1);
                counts
            },
        )
        .reduce(
            || vec![0u64; mdp.num_states()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Distribution::normalized(counts.into_iter().map(|c| c as f64).collect())
}

/// Sample mean and standard error of the episode return `Σ_i r(s_i)`.
pub fn rollout_return(
    mdp: &FiniteMdp,
    policy: &Policy,
    episodes: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    policy.check_compatible(mdp)?;
    if episodes < 2 {
        return Err(Error::InvalidArgument(
            "standard error needs at least two episodes".into(),
        ));
    }
    let returns: Vec<f64> = (0..episodes)
        .into_par_iter()
        .map(|ep| {
            let mut total = 0.0;
            simulate_episode(mdp, policy, seed, ep, |s| total += mdp.reward()[s]);
            total
        })
        .collect();
    Ok(mean_and_stderr(&returns))
}
