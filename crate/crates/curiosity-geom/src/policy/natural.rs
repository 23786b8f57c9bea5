//! Natural-gradient ascent with the occupancy-space Fisher-Rao metric
//! pulled back to policy parameters.
//!
//! The pullback metric is `f''(1) Jᵀ diag(1/p) J` with `J` the occupancy
//! Jacobian. Solving `(G + damping I) dir = ∇θ` through a symmetric
//! eigendecomposition (small eigenvalues cut off) gives the ascent
//! direction; Armijo backtracking on the exact objective keeps the iterate
//! sequence monotone.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mdp::{occupancy, FiniteMdp};
use crate::policy::jacobian::occupancy_jacobian;
use crate::policy::{OptimizerState, SoftmaxPolicy};
use crate::rewards::{f_information_value, RewardSpec};

const EIGEN_CUTOFF: f64 = 1e-12;
const STEP_FLOOR: f64 = 1e-12;

/// Exact objective `scale * (n+1) Σ p_s (r_s + beta f(1/p_s))`, with the
/// limit convention `0 * f(inf) = 0` at zero-occupancy states.
pub fn occupancy_objective(mdp: &FiniteMdp, policy: &SoftmaxPolicy, spec: &RewardSpec) -> Result<f64> {
    crate::simplex::check_same_dim(spec.extrinsic().len(), mdp.num_states())?;
    let occ = occupancy(mdp, &policy.policy())?;
    let mut total = 0.0;
    for (&ps, &rs) in occ.dist.weights().iter().zip(spec.extrinsic()) {
        if ps == 0.0 {
            continue;
        }
        total += ps * (rs + spec.beta() * spec.generator().eval(1.0 / ps));
    }
    Ok(spec.scale() * (mdp.horizon() as f64 + 1.0) * total)
}

/// Pullback of the occupancy-space Fisher-Rao tensor to logit space:
/// `|f''(1)| Jᵀ diag(1/p) J`. Symmetric positive semidefinite; errors on
/// zero-occupancy states.
pub fn pullback_metric(
    mdp: &FiniteMdp,
    policy: &SoftmaxPolicy,
    generator: &crate::geometry::GeneratorF,
) -> Result<DMatrix<f64>> {
    let occ = occupancy(mdp, &policy.policy())?;
    if let Some(i) = occ.dist.weights().iter().position(|&p| p <= 0.0) {
        return Err(Error::InvalidWeights {
            context: "pullback metric".into(),
            reason: format!("occupancy[{i}] = 0; the metric needs full support"),
        });
    }
    let jac = occupancy_jacobian(mdp, policy)?;
    let d = mdp.num_states();
    let params = jac.ncols();
    let mut metric = DMatrix::zeros(params, params);
    for s in 0..d {
        let row = jac.row(s);
        let w = generator.metric_scale() / occ.dist[s];
        // metric += w * row^T row
        for i in 0..params {
            for j in i..params {
                let v = w * row[i] * row[j];
                metric[(i, j)] += v;
                if i != j {
                    metric[(j, i)] += v;
                }
            }
        }
    }
    Ok(metric)
}

/// Objective gradient in logit space: `Jᵀ` applied to the per-state
/// derivative `scale (n+1) (r_s + beta [f(1/p_s) - f'(1/p_s)/p_s])`.
fn objective_gradient_theta(
    mdp: &FiniteMdp,
    policy: &SoftmaxPolicy,
    spec: &RewardSpec,
) -> Result<DVector<f64>> {
    let occ = occupancy(mdp, &policy.policy())?;
    let jac = occupancy_jacobian(mdp, policy)?;
    let episode = mdp.horizon() as f64 + 1.0;
    let f = spec.generator();
    let per_state: Vec<f64> = occ
        .dist
        .weights()
        .iter()
        .zip(spec.extrinsic())
        .map(|(&ps, &rs)| {
            if ps <= 0.0 {
                // Limit of the derivative as mass vanishes; only reachable
                // states contribute to the Jacobian anyway.
                return spec.scale() * episode * (rs + spec.beta() * f_information_value(0.0, f));
            }
            let x = 1.0 / ps;
            spec.scale() * episode * (rs + spec.beta() * (f.eval(x) - f.deriv(x) * x))
        })
        .collect();
    Ok(jac.transpose() * DVector::from_vec(per_state))
}

fn solve_damped(
    metric: &DMatrix<f64>,
    grad: &DVector<f64>,
    damping: f64,
) -> Result<DVector<f64>> {
    let eigen = metric.clone().symmetric_eigen();
    let max_eig = eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = EIGEN_CUTOFF * max_eig.max(1e-300);
    if damping == 0.0 && eigen.eigenvalues.iter().any(|&l| l <= cutoff) {
        return Err(Error::SingularMetric(
            "pullback metric is rank-deficient; use a positive damping".into(),
        ));
    }
    let coords = eigen.eigenvectors.transpose() * grad;
    let mut scaled = DVector::zeros(coords.len());
    for i in 0..coords.len() {
        let denom = eigen.eigenvalues[i] + damping;
        if denom > cutoff {
            scaled[i] = coords[i] / denom;
        }
    }
    Ok(&eigen.eigenvectors * scaled)
}

fn ascend(
    mdp: &FiniteMdp,
    state: &OptimizerState,
    spec: &RewardSpec,
    step: f64,
    damping: f64,
    natural: bool,
) -> Result<OptimizerState> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    if damping.is_nan() || damping < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "damping must be non-negative, got {damping}"
        )));
    }
    let policy = &state.policy;
    let objective = occupancy_objective(mdp, policy, spec)?;
    let grad = objective_gradient_theta(mdp, policy, spec)?;
    let grad_norm = grad.norm();

    let direction = if natural {
        let metric = pullback_metric(mdp, policy, spec.generator())?;
        solve_damped(&metric, &grad, damping)?
    } else {
        grad.clone()
    };
    let ascent_rate: f64 = grad.dot(&direction);

    if grad_norm == 0.0 || ascent_rate <= 0.0 {
        return Ok(OptimizerState {
            policy: policy.clone(),
            iteration: state.iteration + 1,
            objective,
            grad_norm,
            damping,
            step_taken: 0.0,
            converged: true,
        });
    }

    let mut trial = step;
    while trial >= STEP_FLOOR {
        let candidate = policy.offset(direction.as_slice(), trial);
        let value = occupancy_objective(mdp, &candidate, spec)?;
        if value >= objective + 1e-4 * trial * ascent_rate {
            return Ok(OptimizerState {
                policy: candidate,
                iteration: state.iteration + 1,
                objective: value,
                grad_norm,
                damping,
                step_taken: trial,
                converged: false,
            });
        }
        trial *= 0.5;
    }
    Ok(OptimizerState {
        policy: policy.clone(),
        iteration: state.iteration + 1,
        objective,
        grad_norm,
        damping,
        step_taken: 0.0,
        converged: true,
    })
}

/// One backtracked natural-gradient step: `θ + step (G + damping I)^{-1} ∇`.
pub fn natural_step(
    mdp: &FiniteMdp,
    state: &OptimizerState,
    spec: &RewardSpec,
    step: f64,
    damping: f64,
) -> Result<OptimizerState> {
    ascend(mdp, state, spec, step, damping, true)
}

/// One backtracked vanilla policy-gradient step (identity metric).
pub fn vanilla_policy_gradient_step(
    mdp: &FiniteMdp,
    state: &OptimizerState,
    spec: &RewardSpec,
    step: f64,
) -> Result<OptimizerState> {
    ascend(mdp, state, spec, step, 0.0, false)
}

/// Default Tikhonov damping: `1e-6 * trace(G) / dim`.
pub fn default_damping(metric: &DMatrix<f64>) -> f64 {
    1e-6 * metric.trace() / metric.nrows() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeneratorF;
    use crate::rng::master_rng;
    use rand::Rng;

    fn info_spec(d: usize, beta: f64) -> RewardSpec {
        RewardSpec::new(
            vec![0.0; d],
            beta,
            GeneratorF::alpha_information(-1.0).unwrap(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn zero_horizon_metric_is_zero() {
        let mut rng = master_rng(111);
        let mdp = FiniteMdp::random(&mut rng, 3, 2, 0);
        let metric = pullback_metric(
            &mdp,
            &SoftmaxPolicy::zeros(3, 2),
            &GeneratorF::alpha_information(0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(metric.amax(), 0.0);
    }

    #[test]
    fn metric_is_symmetric_psd_and_scales_with_curvature() {
        let mut rng = master_rng(112);
        for _ in 0..5 {
            let mdp = FiniteMdp::random(&mut rng, 4, 2, 5);
            let policy = SoftmaxPolicy::new(
                (0..4)
                    .map(|_| (0..2).map(|_| rng.random::<f64>()).collect())
                    .collect(),
            )
            .unwrap();
            let g1 = GeneratorF::alpha_information(0.0).unwrap();
            let metric = pullback_metric(&mdp, &policy, &g1).unwrap();
            assert!((&metric - metric.transpose()).amax() < 1e-12);
            let eigen = metric.clone().symmetric_eigen();
            assert!(eigen.eigenvalues.iter().all(|&l| l >= -1e-10));
            // Doubling the generator doubles the metric exactly.
            let g2 = GeneratorF::custom(
                |x| 2.0 * x.ln(),
                |x| 2.0 / x,
                -2.0,
                "2log",
            );
            let doubled = pullback_metric(&mdp, &policy, &g2).unwrap();
            assert!((&doubled - &metric * 2.0).amax() < 1e-10);
        }
    }

    #[test]
    fn reward_free_zero_beta_gradient_is_zero() {
        let mut rng = master_rng(113);
        let mdp = FiniteMdp::random(&mut rng, 3, 2, 4);
        let spec = info_spec(3, 0.0);
        let state = OptimizerState::start(SoftmaxPolicy::zeros(3, 2));
        let next = natural_step(&mdp, &state, &spec, 0.5, 1e-6).unwrap();
        assert!(next.converged);
        assert!(next.grad_norm < 1e-12);
        assert_eq!(next.policy.logits(), state.policy.logits());
    }

    #[test]
    fn huge_damping_recovers_the_vanilla_direction() {
        let mut rng = master_rng(114);
        let mdp = FiniteMdp::random(&mut rng, 4, 3, 6);
        let policy = SoftmaxPolicy::new(
            (0..4)
                .map(|_| (0..3).map(|_| rng.random::<f64>() * 0.5).collect())
                .collect(),
        )
        .unwrap();
        let spec = info_spec(4, 1.0);
        let metric = pullback_metric(&mdp, &policy, spec.generator()).unwrap();
        let grad = objective_gradient_theta(&mdp, &policy, &spec).unwrap();
        let damping = 1e6 * metric.trace().max(1.0);
        let dir = solve_damped(&metric, &grad, damping).unwrap();
        let cos = grad.dot(&dir) / (grad.norm() * dir.norm());
        assert!(cos > 1.0 - 1e-6, "cosine to vanilla direction: {cos}");
    }

    #[test]
    fn undamped_rank_deficient_metric_is_rejected() {
        // Softmax logits are shift-invariant per row, so J always has a
        // null space and the raw metric is singular.
        let mut rng = master_rng(115);
        let mdp = FiniteMdp::random(&mut rng, 3, 2, 4);
        let spec = info_spec(3, 1.0);
        let state = OptimizerState::start(SoftmaxPolicy::zeros(3, 2));
        let err = natural_step(&mdp, &state, &spec, 0.5, 0.0).unwrap_err();
        assert!(matches!(err, Error::SingularMetric(_)));
    }

    #[test]
    fn objective_is_monotone_under_both_optimizers() {
        let mut rng = master_rng(116);
        let mdp = FiniteMdp::random(&mut rng, 4, 2, 6);
        let spec = RewardSpec::new(
            mdp.reward().to_vec(),
            0.5,
            GeneratorF::alpha_information(-1.0).unwrap(),
            false,
        )
        .unwrap();
        for natural in [true, false] {
            let mut state = OptimizerState::start(SoftmaxPolicy::zeros(4, 2));
            let mut last = f64::NEG_INFINITY;
            for _ in 0..40 {
                state = if natural {
                    natural_step(&mdp, &state, &spec, 1.0, 1e-6).unwrap()
                } else {
                    vanilla_policy_gradient_step(&mdp, &state, &spec, 1.0).unwrap()
                };
                assert!(state.objective >= last - 1e-12);
                last = state.objective;
                if state.converged {
                    break;
                }
            }
        }
    }
}
