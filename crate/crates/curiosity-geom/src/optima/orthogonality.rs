//! Projection orthogonality at curiosity optima.
//!
//! Each optimum is the divergence projection of the uniform point onto its
//! isoreturn hyperplane. Geometrically: the raw order-(-alpha) geodesic from
//! uniform to the optimum meets the hyperplane Fisher-Rao-orthogonally. The
//! check builds the geodesic velocity at the optimum, a basis of the
//! hyperplane tangent space {Σ v = 0, Σ v r = 0}, and reports the largest
//! normalized inner product.

use crate::error::Result;
use crate::geometry::geodesic::GeodesicSpec;
use crate::geometry::metric::{fisher_rao_inner, fisher_rao_norm};
use crate::optima::{closed_form_optimum, OptimaProblem};

/// Orthonormal-ish (Euclidean Gram-Schmidt) basis of {v : Σ v = 0, Σ v r = 0}.
fn hyperplane_tangent_basis(reward: &[f64]) -> Vec<Vec<f64>> {
    let d = reward.len();
    let mut normals: Vec<Vec<f64>> = vec![vec![1.0; d], reward.to_vec()];
    // Orthonormalize the normals first.
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for n in &mut normals {
        let mut v = n.clone();
        for f in &frame {
            let dot: f64 = v.iter().zip(f).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(f) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in &mut v {
                *x /= norm;
            }
            frame.push(v);
        }
    }
    // Project coordinate vectors against the frame to span the tangent.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        for f in frame.iter().chain(&basis) {
            let dot: f64 = v.iter().zip(f).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(f) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for x in &mut v {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Maximum normalized Fisher-Rao inner product between the projection
/// geodesic velocity at the optimum and the isoreturn tangent directions.
/// A constant reward degenerates the hyperplane and reports zero.
pub fn projection_orthogonality(prob: &OptimaProblem) -> Result<f64> {
    if prob.reward_is_constant() {
        return Ok(0.0);
    }
    let optimum = closed_form_optimum(prob)?;
    let uniform = prob.uniform();
    let geodesic = GeodesicSpec::new(
        uniform.weights().to_vec(),
        optimum.weights().to_vec(),
        -prob.alpha(),
        false,
    )?;
    let velocity = geodesic.raw_velocity_at_end();
    let at = optimum.weights();
    let vel_norm = fisher_rao_norm(at, &velocity)?;
    if vel_norm <= 1e-14 {
        // Optimum coincides with uniform; orthogonality is vacuous.
        return Ok(0.0);
    }
    let mut residual = 0.0f64;
    for v in hyperplane_tangent_basis(prob.reward()) {
        let ip = fisher_rao_inner(at, &velocity, &v)?;
        let vn = fisher_rao_norm(at, &v)?;
        residual = residual.max((ip / (vel_norm * vn)).abs());
    }
    Ok(residual)
}
