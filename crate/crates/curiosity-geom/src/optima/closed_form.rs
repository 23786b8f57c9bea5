//! Closed-form curiosity optima via scalar multiplier root-finding.
//!
//! Stationarity of the objective on the simplex forces
//!
//! ```text
//! p_s ∝ (kappa - r_s)^(-2/(alpha+1))
//! ```
//!
//! for a scalar multiplier `kappa` above the largest reward, with the
//! exponential (Gibbs) limit `p_s ∝ exp(r_s / beta)` at alpha = -1. The
//! normalization condition pins `kappa`: the simplex mass of the candidate
//! family is strictly decreasing in `kappa`, diverges as `kappa` approaches
//! `max r`, and vanishes at infinity, so bisection on the log scale finds
//! the unique root. Normalization and stationarity then hold jointly, which
//! is exactly the first-order optimality system.

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::optima::OptimaProblem;
use crate::simplex::Distribution;

/// Compute the closed-form maximizer. Supports `alpha >= -1` (excluding the
/// divergent order 1); a constant reward short-circuits to uniform and
/// `beta = 0` returns the vertex convention (mass on the first best state).
pub fn closed_form_optimum(prob: &OptimaProblem) -> Result<Distribution> {
    let d = prob.dim();
    if prob.reward_is_constant() {
        return Ok(prob.uniform());
    }
    if prob.beta() == 0.0 {
        // Limit convention, not a stationary point: all mass on the
        // max-reward state, ties broken by lowest index.
        let mut best = 0;
        for (s, &r) in prob.reward().iter().enumerate() {
            if r > prob.reward()[best] {
                best = s;
            }
        }
        return Ok(Distribution::point_mass(d, best));
    }

    let alpha = prob.alpha();
    let max_r = prob.reward().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // Shifted rewards keep the multiplier bracket at (0, inf).
    let shifted: Vec<f64> = prob.reward().iter().map(|r| r - max_r).collect();

    if (alpha + 1.0).abs() < 1e-12 {
        let weights: Vec<f64> = shifted.iter().map(|r| (r / prob.beta()).exp()).collect();
        return Distribution::normalized(weights);
    }
    if alpha < -1.0 {
        return Err(Error::InvalidArgument(format!(
            "closed form supports orders alpha >= -1, got {alpha}"
        )));
    }

    let k = (alpha + 1.0) / 2.0;
    let scale = 2.0 * prob.beta() / (alpha + 1.0);
    let mass = |kappa: f64| -> f64 {
        shifted
            .iter()
            .map(|&r| (scale / (kappa - r)).powf(1.0 / k))
            .sum()
    };

    // Bracket the normalization root on the log scale.
    let mut log_hi = 0.0f64;
    let mut guard = 0;
    while mass(log_hi.exp()) >= 1.0 {
        log_hi += std::f64::consts::LN_2;
        guard += 1;
        if guard > 4200 {
            return Err(Error::NoRoot {
                lo: 1.0,
                hi: log_hi.exp(),
            });
        }
    }
    let mut log_lo = log_hi - std::f64::consts::LN_2;
    guard = 0;
    while mass(log_lo.exp()) < 1.0 {
        log_lo -= std::f64::consts::LN_2;
        guard += 1;
        if guard > 4200 {
            return Err(Error::NoRoot {
                lo: log_lo.exp(),
                hi: log_hi.exp(),
            });
        }
    }
    let log_kappa = bisect(log_lo, log_hi, 1e-15, |x| 1.0 - mass(x.exp()));
    let kappa = log_kappa.exp();
    let weights: Vec<f64> = shifted
        .iter()
        .map(|&r| (scale / (kappa - r)).powf(1.0 / k))
        .collect();
    Distribution::normalized(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::l1_distance;
    use crate::optima::objective;
    use crate::rng::{master_rng, sample_interior_simplex};

    #[test]
    fn constant_reward_gives_uniform() {
        let prob = OptimaProblem::new(vec![2.5; 4], 0.0, 1.0, 0).unwrap();
        let p = closed_form_optimum(&prob).unwrap();
        assert!(l1_distance(p.weights(), prob.uniform().weights()) < 1e-14);
    }

    #[test]
    fn beta_zero_vertex_convention() {
        let prob = OptimaProblem::new(vec![0.3, 0.9, 0.9, 0.1], 0.0, 0.0, 0).unwrap();
        let p = closed_form_optimum(&prob).unwrap();
        assert_eq!(p.weights(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn gibbs_branch_matches_softmax() {
        // d = 3, r = (1,0,0), alpha = -1, beta = 1: maximizing
        // Σ p r + H(p) gives softmax(r) = (e,1,1)/(e+2).
        let prob = OptimaProblem::new(vec![1.0, 0.0, 0.0], -1.0, 1.0, 0).unwrap();
        let p = closed_form_optimum(&prob).unwrap();
        let e = std::f64::consts::E;
        let expected = [e / (e + 2.0), 1.0 / (e + 2.0), 1.0 / (e + 2.0)];
        assert!(l1_distance(p.weights(), &expected) < 1e-12);
    }

    #[test]
    fn optimum_is_stationary_and_interior() {
        let mut rng = master_rng(91);
        for trial in 0..40 {
            let d = 3 + trial % 5;
            let reward: Vec<f64> = sample_interior_simplex(&mut rng, d, 0.0)
                .iter()
                .map(|w| 4.0 * w - 0.5)
                .collect();
            for alpha in [-1.0, -0.5, 0.0, 0.5, 2.0] {
                for beta in [0.1, 1.0, 10.0] {
                    let prob = OptimaProblem::new(reward.clone(), alpha, beta, 1).unwrap();
                    let p = closed_form_optimum(&prob).unwrap();
                    assert!(p.is_interior(), "full support required at beta > 0");
                    // The projected gradient vanishes at an interior optimum.
                    let grad = crate::optima::objective_gradient(p.weights(), &prob).unwrap();
                    let avg: f64 = p.weights().iter().zip(&grad).map(|(pi, gi)| pi * gi).sum();
                    let residual = grad
                        .iter()
                        .map(|g| (g - avg).abs())
                        .fold(0.0f64, f64::max);
                    let scale = crate::numeric::max_abs(&grad).max(1.0);
                    assert!(
                        residual / scale < 1e-9,
                        "alpha={alpha} beta={beta}: KKT residual {residual:.2e}"
                    );
                }
            }
        }
    }

    #[test]
    fn objective_dominates_random_candidates() {
        let prob = OptimaProblem::new(vec![1.0, 0.5, 0.25, 0.0], 0.0, 1.0, 0).unwrap();
        let p = closed_form_optimum(&prob).unwrap();
        let at_opt = objective(&p, &prob).unwrap();
        let mut rng = master_rng(92);
        for _ in 0..5000 {
            let q = Distribution::new(sample_interior_simplex(&mut rng, 4, 0.0)).unwrap();
            assert!(objective(&q, &prob).unwrap() <= at_opt + 1e-10);
        }
    }

    #[test]
    fn unsupported_orders_fail_loudly() {
        let prob = OptimaProblem::new(vec![1.0, 0.0], -2.0, 1.0, 0).unwrap();
        assert!(closed_form_optimum(&prob).is_err());
    }
}
