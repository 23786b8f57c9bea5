//! Curiosity optima on the full simplex.
//!
//! For a reward vector `r`, order `alpha` and trade-off weight `beta > 0`,
//! the objective over occupancies is
//!
//! ```text
//! R_{alpha,beta}(p) = (n+1) Σ_s p_s (r_s + beta I_alpha(s;p))
//! ```
//!
//! The intrinsic term is concave for every order (it is an affine function
//! of the divergence to uniform), so the maximizer is unique for beta > 0.
//! This module computes it three independent ways — a multiplier closed
//! form, entropic mirror ascent, and a constrained divergence minimization —
//! and verifies the geometric structure of the solution set: projection
//! orthogonality at each optimum and the geodesic shape of the beta-sweep.

mod closed_form;
mod equivalence;
mod numerical;
mod orthogonality;
mod sweep;

pub use closed_form::closed_form_optimum;
pub use equivalence::{divergence_min_equivalence, EquivalenceReport};
pub use numerical::{numerical_optimum, NumericalOptions};
pub use orthogonality::projection_orthogonality;
pub use sweep::{beta_sweep, BetaSweepPoint, BetaSweepReport};

use crate::error::{Error, Result};
use crate::rewards::alpha_information_value;
use crate::simplex::Distribution;

/// A full-simplex curiosity optimization instance. The horizon enters the
/// objective only through the positive factor `n+1`, so it scales values but
/// never moves the maximizer.
#[derive(Debug, Clone)]
pub struct OptimaProblem {
    reward: Vec<f64>,
    alpha: f64,
    beta: f64,
    horizon: u32,
}

impl OptimaProblem {
    pub fn new(reward: Vec<f64>, alpha: f64, beta: f64, horizon: u32) -> Result<Self> {
        if reward.len() < 2 {
            return Err(Error::InvalidArgument(
                "optimization needs at least two states".into(),
            ));
        }
        if reward.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidArgument("non-finite reward entry".into()));
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beta must be non-negative, got {beta}"
            )));
        }
        if (alpha - 1.0).abs() < 1e-12 {
            return Err(Error::InvalidArgument(
                "information diverges at alpha = 1".into(),
            ));
        }
        Ok(Self {
            reward,
            alpha,
            beta,
            horizon,
        })
    }

    pub fn dim(&self) -> usize {
        self.reward.len()
    }

    pub fn reward(&self) -> &[f64] {
        &self.reward
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn uniform(&self) -> Distribution {
        Distribution::uniform(self.dim())
    }

    pub(crate) fn episode_factor(&self) -> f64 {
        self.horizon as f64 + 1.0
    }

    /// True when the reward is constant, making every feasible point an
    /// extrinsic optimum (the intrinsic term then selects uniform).
    pub fn reward_is_constant(&self) -> bool {
        let lo = self.reward.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.reward.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo <= 1e-14 * (1.0 + hi.abs().max(lo.abs()))
    }

    /// Extrinsic return `(n+1) Σ p r`.
    pub fn extrinsic_return(&self, p: &Distribution) -> f64 {
        self.episode_factor()
            * p.weights()
                .iter()
                .zip(&self.reward)
                .map(|(pi, ri)| pi * ri)
                .sum::<f64>()
    }
}

/// Objective value `(n+1) Σ p_s (r_s + beta I_alpha(s;p))`. Zero weights
/// contribute their limit: nothing for orders below 1, negative infinity
/// above (where the weighted information diverges).
pub fn objective(p: &Distribution, prob: &OptimaProblem) -> Result<f64> {
    crate::simplex::check_same_dim(p.dim(), prob.dim())?;
    let mut total = 0.0;
    for (&ps, &rs) in p.weights().iter().zip(&prob.reward) {
        if ps == 0.0 {
            if prob.alpha > 1.0 && prob.beta > 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            continue;
        }
        let info = alpha_information_value(ps, prob.alpha)?;
        total += ps * (rs + prob.beta * info);
    }
    Ok(prob.episode_factor() * total)
}

/// Gradient of the objective in the ambient coordinates: component `s` is
/// `(n+1) (r_s + beta [g(1/p_s) - g'(1/p_s)/p_s])` for the information
/// generator `g`.
pub(crate) fn objective_gradient(p: &[f64], prob: &OptimaProblem) -> Result<Vec<f64>> {
    let g = crate::geometry::GeneratorF::alpha_information(prob.alpha)?;
    Ok(p.iter()
        .zip(&prob.reward)
        .map(|(&ps, &rs)| {
            let x = 1.0 / ps;
            prob.episode_factor() * (rs + prob.beta * (g.eval(x) - g.deriv(x) * x))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewards::shannon_entropy;
    use crate::rng::{master_rng, sample_interior_simplex};

    #[test]
    fn beta_zero_reduces_to_extrinsic_return() {
        let prob = OptimaProblem::new(vec![1.0, 0.5, 0.25, 0.0], 0.0, 0.0, 3).unwrap();
        let mut rng = master_rng(81);
        for _ in 0..10 {
            let p = Distribution::new(sample_interior_simplex(&mut rng, 4, 0.01)).unwrap();
            let obj = objective(&p, &prob).unwrap();
            assert!((obj - prob.extrinsic_return(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_objective_at_flat_order() {
        // r = 0, alpha = -1: the objective reduces to (n+1) beta H(p).
        let prob = OptimaProblem::new(vec![0.0; 5], -1.0, 2.0, 1).unwrap();
        let mut rng = master_rng(82);
        for _ in 0..10 {
            let p = Distribution::new(sample_interior_simplex(&mut rng, 5, 0.01)).unwrap();
            let obj = objective(&p, &prob).unwrap();
            assert!((obj - 2.0 * 2.0 * shannon_entropy(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_maximizes_pure_information() {
        // r = 0: u beats 10^4 random candidates for several orders.
        for alpha in [-1.0, -0.5, 0.0, 0.5] {
            let prob = OptimaProblem::new(vec![0.0; 4], alpha, 1.0, 0).unwrap();
            let at_u = objective(&prob.uniform(), &prob).unwrap();
            let mut rng = master_rng(83);
            for _ in 0..10_000 {
                let p = Distribution::new(sample_interior_simplex(&mut rng, 4, 0.0)).unwrap();
                assert!(objective(&p, &prob).unwrap() <= at_u + 1e-12);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let prob = OptimaProblem::new(vec![0.3, -0.2, 0.9], 0.4, 0.7, 2).unwrap();
        let mut rng = master_rng(84);
        let p = sample_interior_simplex(&mut rng, 3, 0.05);
        let grad = objective_gradient(&p, &prob).unwrap();
        let h = 1e-7;
        for i in 0..3 {
            // Perturb a single coordinate of the unnormalized objective sum.
            let eval = |w: &[f64]| -> f64 {
                prob.episode_factor()
                    * w.iter()
                        .zip(prob.reward())
                        .map(|(&ps, &rs)| {
                            ps * (rs + prob.beta() * alpha_information_value(ps, 0.4).unwrap())
                        })
                        .sum::<f64>()
            };
            let mut hi = p.clone();
            let mut lo = p.clone();
            hi[i] += h;
            lo[i] -= h;
            let fd = (eval(&hi) - eval(&lo)) / (2.0 * h);
            assert!((fd - grad[i]).abs() < 1e-5, "component {i}: {fd} vs {}", grad[i]);
        }
    }
}
