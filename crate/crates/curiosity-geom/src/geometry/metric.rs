//! The Fisher-Rao metric on weight space.
//!
//! At a base point `q` the inner product of tangent vectors `v`, `w` is
//! `Σ v_i w_i / q_i`. At simplex points the radial direction `q` itself is
//! Fisher-Rao-orthogonal to the sum-zero tangent space, so projecting out
//! the radial component reduces measure-space vectors to simplex tangents.

use crate::error::{Error, Result};
use crate::simplex::check_same_dim;

/// Fisher-Rao inner product `Σ v_i w_i / q_i` at base point `q`.
pub fn fisher_rao_inner(q: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
    check_same_dim(q.len(), v.len())?;
    check_same_dim(q.len(), w.len())?;
    let mut total = 0.0;
    for i in 0..q.len() {
        if q[i] <= 0.0 {
            return Err(Error::InvalidWeights {
                context: "Fisher-Rao base point".into(),
                reason: format!("weight[{i}] = {} is not strictly positive", q[i]),
            });
        }
        total += v[i] * w[i] / q[i];
    }
    Ok(total)
}

/// Fisher-Rao norm at `q`.
pub fn fisher_rao_norm(q: &[f64], v: &[f64]) -> Result<f64> {
    Ok(fisher_rao_inner(q, v, v)?.sqrt())
}

/// Remove the radial component of `v` at base point `q`: the result sums to
/// zero and is the Fisher-Rao-orthogonal projection onto the tangent space
/// of the normalized simplex through `q`.
pub fn project_radial(q: &[f64], v: &[f64]) -> Vec<f64> {
    let sum_v: f64 = v.iter().sum();
    let sum_q: f64 = q.iter().sum();
    let c = sum_v / sum_q;
    v.iter().zip(q).map(|(&vi, &qi)| vi - c * qi).collect()
}

/// Cosine of the Fisher-Rao angle between `v` and `w` at `q`.
///
/// Errors when either vector is zero-length or a norm overflows.
pub fn fisher_rao_cosine(q: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
    let nv = fisher_rao_norm(q, v)?;
    let nw = fisher_rao_norm(q, w)?;
    if nv == 0.0 || nw == 0.0 || !nv.is_finite() || !nw.is_finite() {
        return Err(Error::Degenerate(
            "zero-length or non-finite vector in Fisher-Rao cosine".into(),
        ));
    }
    Ok((fisher_rao_inner(q, v, w)? / (nv * nw)).clamp(-1.0, 1.0))
}
