//! Exact occupancies via kernel powers.
//!
//! The agent-environment interaction is the row-stochastic matrix
//! `M[s][s'] = Σ_a π(s,a) δ(s,a,s')`. Over an episode of `n+1` states the
//! occupancy is the exact average `(1/(n+1)) Σ_{k=0}^n μᵀ M^k`, and the
//! episode return can be read off the occupancy as `(n+1) Σ_s p_s r_s`.

use crate::error::Result;
use crate::mdp::{FiniteMdp, Policy};
use crate::simplex::{check_same_dim, Distribution};

/// State-visitation distribution of a policy, tagged with the horizon it
/// was computed for.
#[derive(Debug, Clone)]
pub struct Occupancy {
    pub dist: Distribution,
    pub horizon: u32,
}

/// The agent-environment kernel `M[s][s'] = Σ_a π(s,a) δ(s,a,s')`.
pub fn agent_env_kernel(mdp: &FiniteMdp, policy: &Policy) -> Result<Vec<Vec<f64>>> {
    policy.check_compatible(mdp)?;
    let d = mdp.num_states();
    let mut kernel = vec![vec![0.0; d]; d];
    for (s, row) in kernel.iter_mut().enumerate() {
        for a in 0..mdp.num_actions() {
            let pa = policy.row(s)[a];
            if pa == 0.0 {
                continue;
            }
            for (s_next, w) in row.iter_mut().enumerate() {
                *w += pa * mdp.transition(s, a)[s_next];
            }
        }
    }
    Ok(kernel)
}

pub(crate) fn row_times_matrix(row: &[f64], matrix: &[Vec<f64>]) -> Vec<f64> {
    let d = matrix[0].len();
    let mut out = vec![0.0; d];
    for (s, &w) in row.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (s_next, x) in out.iter_mut().enumerate() {
            *x += w * matrix[s][s_next];
        }
    }
    out
}

/// Exact occupancy `(1/(n+1)) Σ_{k=0}^n μᵀ M^k`.
pub fn occupancy(mdp: &FiniteMdp, policy: &Policy) -> Result<Occupancy> {
    let kernel = agent_env_kernel(mdp, policy)?;
    let n = mdp.horizon() as usize;
    let mut current = mdp.start().weights().to_vec();
    let mut accum = current.clone();
    for _ in 0..n {
        current = row_times_matrix(&current, &kernel);
        for (acc, x) in accum.iter_mut().zip(&current) {
            *acc += x;
        }
    }
    let dist = Distribution::normalized(accum)?;
    Ok(Occupancy {
        dist,
        horizon: mdp.horizon(),
    })
}

/// Episode return via the occupancy: `(n+1) Σ_s p_s r_s`.
pub fn occupancy_return(occ: &Occupancy, reward: &[f64]) -> Result<f64> {
    check_same_dim(occ.dist.dim(), reward.len())?;
    let dot: f64 = occ
        .dist
        .weights()
        .iter()
        .zip(reward)
        .map(|(p, r)| p * r)
        .sum();
    Ok((occ.horizon as f64 + 1.0) * dot)
}
