//! The divergence-minimization characterization of curiosity optima.
//!
//! On the isoreturn slice through the optimum, maximizing the information
//! term is the same problem as minimizing the divergence to uniform. This
//! module solves the constrained problem `min D_alpha(p‖u)` subject to the
//! return matching the closed-form optimum, by Euclidean projected gradient
//! descent on the affine slice — an algorithmically independent route whose
//! minimizer must coincide with the closed form.

use crate::error::{Error, Result};
use crate::geometry::divergence::alpha_divergence;
use crate::numeric::max_abs;
use crate::optima::{closed_form_optimum, OptimaProblem};
use crate::simplex::Distribution;

/// Outcome of the equivalence check.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub closed_form: Distribution,
    pub constrained: Distribution,
    pub l1_distance: f64,
    /// Extrinsic return shared by both points.
    pub return_target: f64,
}

/// Gradient of `p -> D_alpha(p‖u)` in ambient coordinates.
fn divergence_to_uniform_gradient(p: &[f64], alpha: f64, d: usize) -> Vec<f64> {
    let u = 1.0 / d as f64;
    if (alpha + 1.0).abs() < 1e-12 {
        return p.iter().map(|&ps| (ps / u).ln() + 1.0).collect();
    }
    let k = (alpha + 1.0) / 2.0;
    let coeff = -(2.0 / (alpha + 1.0)) * u.powf(k);
    p.iter().map(|&ps| coeff * ps.powf(-k)).collect()
}

struct AffineSlice {
    reward: Vec<f64>,
    // Gram matrix of the constraint normals {1, r} and its inverse.
    inv: [[f64; 2]; 2],
    targets: [f64; 2],
}

impl AffineSlice {
    fn new(reward: &[f64], rho: f64) -> Option<Self> {
        let d = reward.len() as f64;
        let sum_r: f64 = reward.iter().sum();
        let sum_rr: f64 = reward.iter().map(|r| r * r).sum();
        let det = d * sum_rr - sum_r * sum_r;
        if det.abs() < 1e-12 * (1.0 + sum_rr) * d {
            return None;
        }
        let inv = [
            [sum_rr / det, -sum_r / det],
            [-sum_r / det, d / det],
        ];
        Some(Self {
            reward: reward.to_vec(),
            inv,
            targets: [1.0, rho],
        })
    }

    /// Project a direction onto the tangent space {Σ v = 0, Σ v r = 0}.
    fn project_direction(&self, v: &[f64]) -> Vec<f64> {
        let b1: f64 = v.iter().sum();
        let b2: f64 = v.iter().zip(&self.reward).map(|(x, r)| x * r).sum();
        let x1 = self.inv[0][0] * b1 + self.inv[0][1] * b2;
        let x2 = self.inv[1][0] * b1 + self.inv[1][1] * b2;
        v.iter()
            .zip(&self.reward)
            .map(|(x, r)| x - x1 - x2 * r)
            .collect()
    }

    /// Snap a point back onto the affine slice (corrects float drift).
    fn reproject_point(&self, p: &mut [f64]) {
        let b1: f64 = p.iter().sum::<f64>() - self.targets[0];
        let b2: f64 = p
            .iter()
            .zip(&self.reward)
            .map(|(x, r)| x * r)
            .sum::<f64>()
            - self.targets[1];
        let x1 = self.inv[0][0] * b1 + self.inv[0][1] * b2;
        let x2 = self.inv[1][0] * b1 + self.inv[1][1] * b2;
        for (x, r) in p.iter_mut().zip(&self.reward) {
            *x -= x1 + x2 * r;
        }
    }
}

/// Interior feasible start: blend uniform toward the vertex whose return
/// brackets the target, solving the blend weight exactly.
fn interior_start(reward: &[f64], rho: f64) -> Result<Vec<f64>> {
    let d = reward.len();
    let rho_u: f64 = reward.iter().sum::<f64>() / d as f64;
    let vertex = if rho >= rho_u {
        (0..d).max_by(|&i, &j| reward[i].total_cmp(&reward[j])).unwrap()
    } else {
        (0..d).min_by(|&i, &j| reward[i].total_cmp(&reward[j])).unwrap()
    };
    let rho_v = reward[vertex];
    let t = if (rho_v - rho_u).abs() < 1e-300 {
        0.0
    } else {
        // Clamp away float drift: the optimum return never undershoots the
        // uniform return.
        ((rho - rho_u) / (rho_v - rho_u)).max(0.0)
    };
    if !(0.0..1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "return target {rho} outside the achievable interior"
        )));
    }
    let u = 1.0 / d as f64;
    Ok((0..d)
        .map(|s| (1.0 - t) * u + if s == vertex { t } else { 0.0 })
        .collect())
}

/// Solve `min D_alpha(p‖u)` on the isoreturn slice of the closed-form
/// optimum and compare the two points.
pub fn divergence_min_equivalence(prob: &OptimaProblem, tol: f64) -> Result<EquivalenceReport> {
    let closed = closed_form_optimum(prob)?;
    let d = prob.dim();
    let uniform = prob.uniform();
    let rho: f64 = closed
        .weights()
        .iter()
        .zip(prob.reward())
        .map(|(p, r)| p * r)
        .sum();

    if prob.reward_is_constant() {
        let l1 = closed.l1_distance(&uniform);
        return Ok(EquivalenceReport {
            closed_form: closed,
            constrained: uniform,
            l1_distance: l1,
            return_target: prob.episode_factor() * rho,
        });
    }

    let slice = AffineSlice::new(prob.reward(), rho).ok_or_else(|| {
        Error::Degenerate("isoreturn slice is degenerate (reward nearly constant)".into())
    })?;
    let mut p = interior_start(prob.reward(), rho)?;
    slice.reproject_point(&mut p);

    let value_of = |w: &[f64]| alpha_divergence(w, uniform.weights(), prob.alpha());
    let mut value = value_of(&p)?;
    let mut step = 1e-2;
    let max_iterations = 400_000;
    let mut converged = false;
    for _ in 0..max_iterations {
        let grad = divergence_to_uniform_gradient(&p, prob.alpha(), d);
        let direction = slice.project_direction(&grad);
        let g_norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if g_norm <= 1e-11 * (1.0 + max_abs(&grad)) {
            converged = true;
            break;
        }
        let mut accepted = false;
        while step >= 1e-16 {
            let mut candidate: Vec<f64> = p
                .iter()
                .zip(&direction)
                .map(|(x, g)| x - step * g)
                .collect();
            if candidate.iter().all(|&x| x > 0.0) {
                slice.reproject_point(&mut candidate);
                if candidate.iter().all(|&x| x > 0.0) {
                    let cand_value = value_of(&candidate)?;
                    // Strict decrease: equal values mean float resolution is
                    // exhausted and the step should shrink to the floor.
                    if cand_value < value
                        && cand_value <= value - 1e-4 * step * g_norm * g_norm
                    {
                        p = candidate;
                        value = cand_value;
                        step *= 1.5;
                        accepted = true;
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        if !accepted {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: max_iterations,
            residual: f64::NAN,
            tolerance: tol,
        });
    }

    let constrained = Distribution::normalized(p)?;
    let l1 = closed.l1_distance(&constrained);
    if l1 > tol {
        return Err(Error::NoConvergence {
            iterations: max_iterations,
            residual: l1,
            tolerance: tol,
        });
    }
    Ok(EquivalenceReport {
        closed_form: closed,
        constrained,
        l1_distance: l1,
        return_target: prob.episode_factor() * rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::l1_distance;
    use crate::rng::{master_rng, sample_interior_simplex};

    #[test]
    fn constant_reward_gives_uniform_on_both_sides() {
        let prob = OptimaProblem::new(vec![1.0; 4], 0.0, 1.0, 0).unwrap();
        let report = divergence_min_equivalence(&prob, 1e-6).unwrap();
        assert!(report.l1_distance < 1e-12);
        assert!(report.constrained.l1_distance(&prob.uniform()) < 1e-12);
    }

    #[test]
    fn gibbs_point_solves_the_constrained_entropy_problem() {
        let prob = OptimaProblem::new(vec![1.0, 0.0, 0.0], -1.0, 1.0, 0).unwrap();
        let report = divergence_min_equivalence(&prob, 1e-6).unwrap();
        let e = std::f64::consts::E;
        let expected = [e / (e + 2.0), 1.0 / (e + 2.0), 1.0 / (e + 2.0)];
        assert!(l1_distance(report.constrained.weights(), &expected) < 1e-6);
    }

    #[test]
    fn random_rewards_at_zero_order() {
        let mut rng = master_rng(95);
        for _ in 0..5 {
            let reward: Vec<f64> = sample_interior_simplex(&mut rng, 4, 0.0)
                .iter()
                .map(|w| 3.0 * w)
                .collect();
            let prob = OptimaProblem::new(reward, 0.0, 1.0, 0).unwrap();
            let report = divergence_min_equivalence(&prob, 1e-5).unwrap();
            assert!(report.l1_distance <= 1e-5);
        }
    }
}
