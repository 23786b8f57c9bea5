//! Analytic derivative of the occupancy with respect to softmax logits.
//!
//! Differentiating `p = (1/(n+1)) Σ_k μᵀ M(θ)^k` by the product rule gives,
//! for the logit (s, a),
//!
//! ```text
//! ∂p/∂θ_{sa} = (1/(n+1)) Σ_{k=1}^{n} Σ_{j<k} μᵀ M^j (∂M/∂θ_{sa}) M^{k-1-j}
//! ```
//!
//! where `∂M/∂θ_{sa}` is supported on row `s` only and equals
//! `π(s,a) (δ(s,a,·) - M(s,·))` there. Grouping the double sum by `j` turns
//! the computation into one `d×d` accumulation per state.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::mdp::{agent_env_kernel, FiniteMdp};
use crate::policy::SoftmaxPolicy;

/// Jacobian matrix of shape `d x (d * m)`: row `s'` is the occupancy state,
/// column `s * m + a` the logit.
pub fn occupancy_jacobian(mdp: &FiniteMdp, policy: &SoftmaxPolicy) -> Result<DMatrix<f64>> {
    let table = policy.policy();
    table.check_compatible(mdp)?;
    let d = mdp.num_states();
    let m = mdp.num_actions();
    let n = mdp.horizon() as usize;
    let mut jacobian = DMatrix::zeros(d, d * m);
    if n == 0 {
        // The occupancy is the start distribution: no policy dependence.
        return Ok(jacobian);
    }

    let kernel = agent_env_kernel(mdp, &table)?;

    // Forward vectors v_j = mu^T M^j for j = 0..n-1.
    let mut forward = Vec::with_capacity(n);
    forward.push(mdp.start().weights().to_vec());
    for j in 1..n {
        let prev = &forward[j - 1];
        forward.push(crate::mdp::row_times_matrix(prev, &kernel));
    }

    // Kernel-power partial sums W_l = Σ_{i<=l} M^i for l = 0..n-1.
    let mut power = DMatrix::identity(d, d);
    let kernel_mat = DMatrix::from_fn(d, d, |r, c| kernel[r][c]);
    let mut partial_sums = Vec::with_capacity(n);
    partial_sums.push(power.clone());
    for _ in 1..n {
        power = &power * &kernel_mat;
        let last = partial_sums.last().unwrap().clone();
        partial_sums.push(last + &power);
    }

    let episode = (n + 1) as f64;
    for s in 0..d {
        // B_s = Σ_j v_j[s] W_{n-1-j}.
        let mut weighted = DMatrix::zeros(d, d);
        for (j, v) in forward.iter().enumerate() {
            if v[s] != 0.0 {
                weighted += &partial_sums[n - 1 - j] * v[s];
            }
        }
        for a in 0..m {
            let pa = table.row(s)[a];
            // Row of dM/dtheta_{sa}: pi(s,a) (delta(s,a,.) - M(s,.)).
            for sp in 0..d {
                let mut total = 0.0;
                for x in 0..d {
                    let row_x = pa * (mdp.transition(s, a)[x] - kernel[s][x]);
                    if row_x != 0.0 {
                        total += row_x * weighted[(x, sp)];
                    }
                }
                jacobian[(sp, s * m + a)] = total / episode;
            }
        }
    }
    Ok(jacobian)
}

/// Central finite differences of the occupancy map, used as the oracle
/// against the analytic Jacobian.
pub fn occupancy_jacobian_fd(
    mdp: &FiniteMdp,
    policy: &SoftmaxPolicy,
    step: f64,
) -> Result<DMatrix<f64>> {
    let d = mdp.num_states();
    let m = policy.num_actions();
    let mut jacobian = DMatrix::zeros(d, d * m);
    for col in 0..d * m {
        let mut delta = vec![0.0; d * m];
        delta[col] = 1.0;
        let hi = crate::mdp::occupancy(mdp, &policy.offset(&delta, step).policy())?;
        let lo = crate::mdp::occupancy(mdp, &policy.offset(&delta, -step).policy())?;
        for sp in 0..d {
            jacobian[(sp, col)] = (hi.dist[sp] - lo.dist[sp]) / (2.0 * step);
        }
    }
    Ok(jacobian)
}
