//! Divergence gradients and the geodetic alignment diagnostic.
//!
//! The Fisher-Rao gradient of `q -> D_f(p‖q)` in measure space has the
//! closed form `grad_i = q_i f'(q_i / p_i)`: the Euclidean gradient
//! `f'(q_i/p_i)` raised by the metric. A generator is geodetic when this
//! gradient points along the geodesic of its own connection order from `q`
//! toward `p`. Adding `c (x - 1)` to a generator leaves its divergence on
//! the simplex unchanged while shifting the measure-space gradient by
//! `c q`, which is exactly the radial direction at `q` — so alignment is
//! measured after projecting both vectors onto the sum-zero tangent space,
//! where the equivalence class has a well-defined direction.

use crate::error::{Error, Result};
use crate::geometry::generator::GeneratorF;
use crate::geometry::geodesic::GeodesicSpec;
use crate::geometry::metric::{fisher_rao_cosine, project_radial};
use crate::simplex::check_same_dim;

/// Fisher-Rao gradient of `q -> D_f(p‖q)`: components `q_i f'(q_i/p_i)`.
///
/// Both arguments must be strictly positive.
pub fn divergence_gradient(p: &[f64], q: &[f64], f: &GeneratorF) -> Result<Vec<f64>> {
    check_same_dim(p.len(), q.len())?;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi <= 0.0 || qi <= 0.0 {
            return Err(Error::InvalidWeights {
                context: "divergence gradient".into(),
                reason: format!("weight[{i}] must be strictly positive (p={pi}, q={qi})"),
            });
        }
    }
    Ok(p.iter()
        .zip(q)
        .map(|(&pi, &qi)| qi * f.deriv(qi / pi))
        .collect())
}

/// Cosine, under the Fisher-Rao metric at `q`, between the gradient of
/// `D_f(p‖·)` and the initial velocity of the raw order-`alpha` geodesic
/// from `q` to `p`, both taken modulo the radial direction.
///
/// Values of magnitude one witness the geodetic property; `p = q` is
/// rejected as degenerate.
pub fn geodetic_alignment(p: &[f64], q: &[f64], f: &GeneratorF, alpha: f64) -> Result<f64> {
    let scale = crate::numeric::max_abs(q).max(crate::numeric::max_abs(p));
    if crate::numeric::l1_distance(p, q) <= 1e-13 * scale {
        return Err(Error::Degenerate(
            "geodesic velocity vanishes (p = q)".into(),
        ));
    }
    let grad = divergence_gradient(p, q, f)?;
    let geodesic = GeodesicSpec::new(q.to_vec(), p.to_vec(), alpha, false)?;
    let velocity = geodesic.raw_velocity_at_start();
    let grad_t = project_radial(q, &grad);
    let vel_t = project_radial(q, &velocity);
    fisher_rao_cosine(q, &grad_t, &vel_t)
}
