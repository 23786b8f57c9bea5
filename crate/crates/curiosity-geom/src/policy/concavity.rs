//! Concavity of the curiosity objective along its own geodesics.
//!
//! The check samples the objective on a uniform grid of the affinely
//! parameterized (raw) order-alpha geodesic and reports the largest
//! positive second difference. On the raw curve the information term is
//! exactly concave in the parameter: its weighted power sum is affine while
//! the mass term is a negated convex power. The extrinsic term is a signed
//! combination of those convex powers, so concavity of the sum holds at the
//! mixture order for every trade-off weight, and at interior orders once
//! the information weight dominates the reward scale. Normalizing the curve
//! would replace the affine parameter with a projective one and break the
//! pointwise statement even though the endpoint chord inequality survives.

use crate::error::Result;
use crate::geometry::generator::GeneratorF;
use crate::geometry::geodesic::GeodesicSpec;
use crate::numeric::{max_second_difference, unit_grid};
use crate::optima::OptimaProblem;
use crate::rng::{sample_interior_simplex, stream_rng};

/// Objective formula extended to raw (sub-normalized) weight vectors.
fn raw_objective(weights: &[f64], reward: &[f64], beta: f64, g: &GeneratorF) -> f64 {
    weights
        .iter()
        .zip(reward)
        .map(|(&w, &r)| {
            if w <= 0.0 {
                0.0
            } else {
                w * (r + beta * g.eval(1.0 / w))
            }
        })
        .sum()
}

/// Maximum positive second difference of the objective along `trials`
/// random raw order-alpha geodesics sampled at `grid_points` parameters.
/// Non-positive results certify concavity at the sampled resolution.
pub fn geodesic_concavity_check(
    reward: &[f64],
    alpha: f64,
    beta: f64,
    trials: usize,
    grid_points: usize,
    seed: u64,
) -> Result<f64> {
    assert!(trials >= 1);
    assert!(grid_points >= 5);
    // Validates the inputs (dimension, finite rewards, admissible order).
    let _ = OptimaProblem::new(reward.to_vec(), alpha, beta.max(f64::MIN_POSITIVE), 0)?;
    let g = GeneratorF::alpha_information(alpha)?;
    let d = reward.len();
    let grid = unit_grid(grid_points);
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial as u64);
        let p = sample_interior_simplex(&mut rng, d, 0.01);
        let q = sample_interior_simplex(&mut rng, d, 0.01);
        let geodesic = GeodesicSpec::new(p, q, alpha, false)?;
        let values: Vec<f64> = grid
            .iter()
            .map(|&t| Ok(raw_objective(&geodesic.eval(t)?, reward, beta, &g)))
            .collect::<Result<_>>()?;
        worst = worst.max(max_second_difference(&values));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::max_abs;

    #[test]
    fn mixture_order_is_concave_for_any_weight() {
        // r = 0 reduces to entropy along mixture lines, and arbitrary
        // rewards stay concave at order -1 because the extrinsic part is
        // affine there.
        for beta in [0.0, 0.3, 10.0] {
            let v = geodesic_concavity_check(&[0.0; 5], -1.0, beta, 50, 33, 1).unwrap();
            assert!(v <= 1e-9, "beta {beta}: violation {v:.2e}");
        }
        let reward = [1.0, -0.5, 0.25, 0.75];
        for beta in [0.0, 1.0, 100.0] {
            let v = geodesic_concavity_check(&reward, -1.0, beta, 50, 33, 2).unwrap();
            assert!(v <= 1e-9, "beta {beta}: violation {v:.2e}");
        }
    }

    #[test]
    fn interior_orders_concave_when_information_dominates() {
        let reward = [0.9, -0.2, 0.4, 0.0, 0.6];
        let beta = 1e3 * max_abs(&reward);
        for alpha in [-0.5, 0.0, 0.5] {
            let v = geodesic_concavity_check(&reward, alpha, beta, 50, 17, 3).unwrap();
            assert!(v <= 1e-9, "alpha {alpha}: violation {v:.2e}");
        }
    }

    #[test]
    fn weightless_interior_order_can_violate_concavity() {
        // With beta = 0 the objective is the extrinsic return, whose raw
        // restriction is a signed sum of convex powers; a sampled search
        // finds a convexity witness.
        let reward = [1.0, 0.0, 0.0, 0.0];
        let v = geodesic_concavity_check(&reward, 0.0, 0.0, 200, 17, 4).unwrap();
        assert!(v > 0.0, "expected a convexity witness, got {v:.2e}");
    }
}
