//! The exploration-exploitation path traced by the trade-off weight.
//!
//! Sweeping `beta` from its smallest value toward infinity moves the
//! optimum from reward-seeking toward uniform. In the power coordinates of
//! order `alpha + 2` every optimum is affine in the reward vector, so the
//! whole path lies on a single normalized geodesic of that order between
//! the smallest-beta optimum and uniform. The sweep verifies this by
//! fitting each computed optimum to the geodesic and reporting the largest
//! L1 mismatch.

use crate::error::{Error, Result};
use crate::geometry::divergence::alpha_divergence;
use crate::geometry::geodesic::GeodesicSpec;
use crate::numeric::{grid_then_golden, l1_distance};
use crate::optima::{closed_form_optimum, OptimaProblem};
use crate::simplex::Distribution;

/// One point of the sweep.
#[derive(Debug, Clone)]
pub struct BetaSweepPoint {
    pub beta: f64,
    pub optimum: Distribution,
    /// Extrinsic return at the optimum.
    pub return_value: f64,
    /// Divergence from the optimum to uniform at the sweep order.
    pub divergence_to_uniform: f64,
    /// L1 distance to the best-fitting point of the reference geodesic.
    pub geodesic_residual: f64,
}

/// Sweep outcome: per-beta points plus the worst geodesic fit.
#[derive(Debug, Clone)]
pub struct BetaSweepReport {
    pub alpha: f64,
    pub points: Vec<BetaSweepPoint>,
    pub max_residual: f64,
}

/// Compute optima along ascending `betas` and fit them to the normalized
/// order-(alpha+2) geodesic between the first optimum and uniform.
pub fn beta_sweep(base: &OptimaProblem, betas: &[f64]) -> Result<BetaSweepReport> {
    if betas.len() < 3 {
        return Err(Error::InvalidArgument(
            "beta sweep needs at least three values".into(),
        ));
    }
    if betas.windows(2).any(|w| w[0] >= w[1]) || betas[0] <= 0.0 {
        return Err(Error::InvalidArgument(
            "betas must be strictly positive and ascending".into(),
        ));
    }

    let problems: Vec<OptimaProblem> = betas
        .iter()
        .map(|&beta| {
            OptimaProblem::new(base.reward().to_vec(), base.alpha(), beta, base.horizon())
        })
        .collect::<Result<_>>()?;
    let optima: Vec<Distribution> = problems
        .iter()
        .map(closed_form_optimum)
        .collect::<Result<_>>()?;

    let uniform = base.uniform();
    let geodesic = GeodesicSpec::new(
        optima[0].weights().to_vec(),
        uniform.weights().to_vec(),
        base.alpha() + 2.0,
        true,
    )?;

    let mut points = Vec::with_capacity(betas.len());
    let mut max_residual = 0.0f64;
    for (problem, optimum) in problems.iter().zip(&optima) {
        let residual = if base.reward_is_constant() {
            0.0
        } else {
            let target = optimum.weights().to_vec();
            let (_, best) = grid_then_golden(256, 1e-12, |t| {
                l1_distance(&geodesic.eval(t).expect("t in [0,1]"), &target)
            });
            best
        };
        max_residual = max_residual.max(residual);
        points.push(BetaSweepPoint {
            beta: problem.beta(),
            return_value: problem.extrinsic_return(optimum),
            divergence_to_uniform: alpha_divergence(
                optimum.weights(),
                uniform.weights(),
                base.alpha(),
            )?,
            optimum: optimum.clone(),
            geodesic_residual: residual,
        });
    }
    Ok(BetaSweepReport {
        alpha: base.alpha(),
        points,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{master_rng, sample_interior_simplex};
    use crate::optima::closed_form_optimum;
    use crate::simplex::Distribution;

    const BETAS: [f64; 5] = [0.1, 0.3, 1.0, 3.0, 10.0];

    #[test]
    fn constant_reward_collapses_to_uniform() {
        let base = OptimaProblem::new(vec![1.0; 4], 0.0, 1.0, 0).unwrap();
        let report = beta_sweep(&base, &BETAS).unwrap();
        assert_eq!(report.max_residual, 0.0);
        for point in &report.points {
            assert!(point.optimum.l1_distance(&base.uniform()) < 1e-12);
        }
    }

    #[test]
    fn flat_order_path_is_log_affine() {
        // alpha = -1: the trade-off curve is the Gibbs path; in log
        // coordinates it is a straight line (the order-1 geodesic).
        let base = OptimaProblem::new(vec![1.0, 0.4, 0.0], -1.0, 1.0, 0).unwrap();
        let report = beta_sweep(&base, &BETAS).unwrap();
        assert!(report.max_residual <= 1e-6, "residual {}", report.max_residual);
    }

    #[test]
    fn zero_order_path_residual() {
        let base = OptimaProblem::new(vec![1.0, 0.5, 0.25, 0.0], 0.0, 1.0, 0).unwrap();
        let report = beta_sweep(&base, &BETAS).unwrap();
        assert!(report.max_residual <= 1e-5, "residual {}", report.max_residual);
    }

    #[test]
    fn random_rewards_across_orders() {
        let mut rng = master_rng(97);
        for alpha in [-1.0, -0.5, 0.0, 0.5] {
            let reward: Vec<f64> = sample_interior_simplex(&mut rng, 5, 0.0)
                .iter()
                .map(|w| 2.0 * w)
                .collect();
            let base = OptimaProblem::new(reward, alpha, 1.0, 0).unwrap();
            let report = beta_sweep(&base, &BETAS).unwrap();
            assert!(
                report.max_residual <= 1e-5,
                "alpha {alpha}: residual {}",
                report.max_residual
            );
        }
    }

    #[test]
    fn monotone_trade_off_along_the_path() {
        // Larger beta moves the optimum toward uniform: the divergence to
        // uniform shrinks and so does the extrinsic return.
        let base = OptimaProblem::new(vec![0.9, 0.2, -0.1, 0.5], 0.0, 1.0, 0).unwrap();
        let report = beta_sweep(&base, &BETAS).unwrap();
        for pair in report.points.windows(2) {
            assert!(pair[1].divergence_to_uniform <= pair[0].divergence_to_uniform + 1e-12);
            assert!(pair[1].return_value <= pair[0].return_value + 1e-12);
        }
    }

    #[test]
    fn beta_limits() {
        let reward = vec![1.0, 0.5, 0.25, 0.0];
        // Huge beta lands on uniform.
        let wide = OptimaProblem::new(reward.clone(), 0.0, 1e8, 0).unwrap();
        let p = closed_form_optimum(&wide).unwrap();
        assert!(p.l1_distance(&wide.uniform()) < 1e-4);
        // Tiny beta concentrates on the argmax state.
        let narrow = OptimaProblem::new(reward, 0.0, 1e-6, 0).unwrap();
        let p = closed_form_optimum(&narrow).unwrap();
        let off_mass: f64 = 1.0 - p.weights()[0];
        assert!(off_mass < 1e-2, "off-argmax mass {off_mass}");
    }

    #[test]
    fn optima_vary_continuously_in_the_order() {
        // A fine order grid produces small, jump-free steps: the map from
        // order to optimum is continuous (the flat-order branch included).
        let reward = vec![1.0, 0.3, -0.2, 0.6];
        let betas = [0.5, 2.0];
        for &beta in &betas {
            let mut last: Option<Distribution> = None;
            let mut max_step = 0.0f64;
            let step = 0.05;
            let mut alpha = -1.0;
            while alpha <= 0.9 + 1e-9 {
                let prob = OptimaProblem::new(reward.clone(), alpha, beta, 0).unwrap();
                let p = closed_form_optimum(&prob).unwrap();
                if let Some(prev) = &last {
                    max_step = max_step.max(p.l1_distance(prev));
                }
                last = Some(p);
                alpha += step;
            }
            // Measured Lipschitz bound with a wide margin: no jumps.
            assert!(
                max_step <= 10.0 * step,
                "beta {beta}: max L1 step {max_step:.3e} over d-alpha {step}"
            );
        }
    }

    #[test]
    fn rejects_unordered_betas() {
        let base = OptimaProblem::new(vec![1.0, 0.0], 0.0, 1.0, 0).unwrap();
        assert!(beta_sweep(&base, &[0.1, 0.1, 1.0]).is_err());
        assert!(beta_sweep(&base, &[0.1, 1.0]).is_err());
    }
}
