//! Generalized straight lines of the alpha-connections on the positive
//! orthant and the simplex.
//!
//! For order `o != 1` the raw curve between weight vectors `p` and `q` is
//! affine in the power coordinates `x -> x^((1-o)/2)`:
//!
//! ```text
//! gamma_i(t) = ((1-t) p_i^((1-o)/2) + t q_i^((1-o)/2))^(2/(1-o))
//! ```
//!
//! and `o = 1` is the log-affine limit `gamma_i(t) = p_i^(1-t) q_i^t`.
//! Order -1 is the ordinary mixture segment. Normalized mode rescales every
//! point onto the simplex; raw mode leaves the curve in measure space. The
//! affine structure in power coordinates is what tests verify in place of
//! integrating the geodesic equation.

use crate::error::{Error, Result};
use crate::simplex::check_same_dim;

/// Weights below this threshold are rejected (or clamped up to it when the
/// clamp flag is set) for orders above the mixture case.
pub const GEODESIC_WEIGHT_FLOOR: f64 = 1e-12;

/// An evaluable geodesic between two weight vectors.
#[derive(Debug, Clone)]
pub struct GeodesicSpec {
    p: Vec<f64>,
    q: Vec<f64>,
    order: f64,
    normalized: bool,
}

impl GeodesicSpec {
    /// Build a geodesic of the given connection order. Endpoints with
    /// weights below [`GEODESIC_WEIGHT_FLOOR`] are rejected for orders
    /// above -1; use [`GeodesicSpec::new_clamped`] to round them up instead.
    pub fn new(p: Vec<f64>, q: Vec<f64>, order: f64, normalized: bool) -> Result<Self> {
        Self::build(p, q, order, normalized, false)
    }

    /// As [`GeodesicSpec::new`], but weights below the floor are clamped to
    /// the floor rather than rejected.
    pub fn new_clamped(p: Vec<f64>, q: Vec<f64>, order: f64, normalized: bool) -> Result<Self> {
        Self::build(p, q, order, normalized, true)
    }

    fn build(
        mut p: Vec<f64>,
        mut q: Vec<f64>,
        order: f64,
        normalized: bool,
        clamp: bool,
    ) -> Result<Self> {
        check_same_dim(p.len(), q.len())?;
        if p.is_empty() {
            return Err(Error::InvalidArgument("empty geodesic endpoints".into()));
        }
        if order > -1.0 {
            for endpoint in [&mut p, &mut q] {
                for (i, w) in endpoint.iter_mut().enumerate() {
                    if *w < GEODESIC_WEIGHT_FLOOR {
                        if clamp {
                            *w = GEODESIC_WEIGHT_FLOOR;
                        } else {
                            return Err(Error::InvalidWeights {
                                context: "geodesic endpoint".into(),
                                reason: format!(
                                    "weight[{i}] = {w} below {GEODESIC_WEIGHT_FLOOR} for order {order}"
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(Self {
            p,
            q,
            order,
            normalized,
        })
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn start(&self) -> &[f64] {
        &self.p
    }

    pub fn end(&self) -> &[f64] {
        &self.q
    }

    /// Point on the curve at `t` in [0, 1]. Endpoints are returned exactly:
    /// near order 1 the power round trip would otherwise amplify rounding
    /// by the reciprocal of the coordinate exponent.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "geodesic parameter {t} outside [0, 1]"
            )));
        }
        if t == 0.0 || t == 1.0 {
            let endpoint = if t == 0.0 { &self.p } else { &self.q };
            let mut out = endpoint.clone();
            if self.normalized {
                let total: f64 = out.iter().sum();
                for w in &mut out {
                    *w /= total;
                }
            }
            return Ok(out);
        }
        let mut out = Vec::with_capacity(self.p.len());
        if (self.order - 1.0).abs() < 1e-12 {
            for (&pi, &qi) in self.p.iter().zip(&self.q) {
                out.push(pi.powf(1.0 - t) * qi.powf(t));
            }
        } else {
            let e = (1.0 - self.order) / 2.0;
            for (&pi, &qi) in self.p.iter().zip(&self.q) {
                let coord = (1.0 - t) * pi.powf(e) + t * qi.powf(e);
                out.push(coord.powf(1.0 / e));
            }
        }
        if self.normalized {
            let total: f64 = out.iter().sum();
            for w in &mut out {
                *w /= total;
            }
        }
        Ok(out)
    }

    /// Analytic velocity of the raw curve at `t = 0`. Only meaningful in
    /// raw (unnormalized) mode.
    pub fn raw_velocity_at_start(&self) -> Vec<f64> {
        raw_velocity(&self.p, &self.q, self.order, 0.0)
    }

    /// Analytic velocity of the raw curve at `t = 1`.
    pub fn raw_velocity_at_end(&self) -> Vec<f64> {
        raw_velocity(&self.p, &self.q, self.order, 1.0)
    }
}

fn raw_velocity(p: &[f64], q: &[f64], order: f64, t: f64) -> Vec<f64> {
    if (order - 1.0).abs() < 1e-12 {
        // d/dt exp((1-t) log p + t log q) = gamma * log(q/p)
        return p
            .iter()
            .zip(q)
            .map(|(&pi, &qi)| pi.powf(1.0 - t) * qi.powf(t) * (qi / pi).ln())
            .collect();
    }
    let e = (1.0 - order) / 2.0;
    p.iter()
        .zip(q)
        .map(|(&pi, &qi)| {
            let a = pi.powf(e);
            let b = qi.powf(e);
            let coord = (1.0 - t) * a + t * b;
            (1.0 / e) * coord.powf(1.0 / e - 1.0) * (b - a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::l1_distance;
    use crate::rng::{master_rng, sample_interior_simplex};

    #[test]
    fn endpoints_are_exact() {
        let mut rng = master_rng(8);
        for order in [-2.0, -1.0, 0.0, 0.5, 1.0, 3.0] {
            let p = sample_interior_simplex(&mut rng, 5, 0.01);
            let q = sample_interior_simplex(&mut rng, 5, 0.01);
            for normalized in [false, true] {
                let g = GeodesicSpec::new(p.clone(), q.clone(), order, normalized).unwrap();
                assert!(l1_distance(&g.eval(0.0).unwrap(), &p) < 1e-10);
                assert!(l1_distance(&g.eval(1.0).unwrap(), &q) < 1e-10);
            }
        }
    }

    #[test]
    fn mixture_midpoint() {
        let g = GeodesicSpec::new(vec![0.6, 0.4], vec![0.2, 0.8], -1.0, true).unwrap();
        let mid = g.eval(0.5).unwrap();
        assert!(l1_distance(&mid, &[0.4, 0.6]) < 1e-14);
    }

    #[test]
    fn square_root_affine_form_hand_value() {
        // Order 0, raw: component i = ((1-t) sqrt(p_i) + t sqrt(q_i))^2.
        let g = GeodesicSpec::new(vec![0.64, 0.36], vec![0.16, 0.04], 0.0, false).unwrap();
        let mid = g.eval(0.5).unwrap();
        assert!(l1_distance(&mid, &[0.36, 0.16]) < 1e-14);
    }

    #[test]
    fn power_coordinates_are_affine_in_t() {
        // Second differences of the raw curve in x^((1-o)/2) coordinates
        // vanish on a 9-point grid.
        let mut rng = master_rng(9);
        for order in [-2.0, -1.0, -0.5, 0.0, 0.5, 2.0] {
            let p = sample_interior_simplex(&mut rng, 4, 0.01);
            let q = sample_interior_simplex(&mut rng, 4, 0.01);
            let g = GeodesicSpec::new(p, q, order, false).unwrap();
            let e = (1.0 - order) / 2.0;
            let grid = crate::numeric::unit_grid(9);
            let coords: Vec<Vec<f64>> = grid
                .iter()
                .map(|&t| g.eval(t).unwrap().iter().map(|w| w.powf(e)).collect())
                .collect();
            for i in 1..8 {
                for (s, mid) in coords[i].iter().enumerate() {
                    let dd = coords[i - 1][s] - 2.0 * mid + coords[i + 1][s];
                    let scale = mid.abs().max(1e-12);
                    assert!(
                        (dd / scale).abs() < 1e-8,
                        "order {order}, grid {i}, state {s}: {dd}"
                    );
                }
            }
        }
    }

    #[test]
    fn endpoints_are_exact_near_the_log_order() {
        // The power exponent blows up as the order approaches 1; endpoint
        // evaluation must not inherit that amplification.
        let p = vec![0.001, 0.5, 0.499];
        let q = vec![0.3, 0.3, 0.4];
        let g = GeodesicSpec::new(p.clone(), q.clone(), 1.0 - 5e-7, false).unwrap();
        assert_eq!(g.eval(0.0).unwrap(), p);
        assert_eq!(g.eval(1.0).unwrap(), q);
    }

    #[test]
    fn log_affine_limit_matches_nearby_orders() {
        let p = vec![0.5, 0.3, 0.2];
        let q = vec![0.2, 0.2, 0.6];
        let exact = GeodesicSpec::new(p.clone(), q.clone(), 1.0, false).unwrap();
        let near = GeodesicSpec::new(p, q, 1.0 - 1e-7, false).unwrap();
        for t in [0.25, 0.5, 0.75] {
            assert!(l1_distance(&exact.eval(t).unwrap(), &near.eval(t).unwrap()) < 1e-6);
        }
    }

    #[test]
    fn zero_weight_endpoints_rejected_unless_clamped() {
        let p = vec![1.0, 0.0];
        let q = vec![0.5, 0.5];
        assert!(GeodesicSpec::new(p.clone(), q.clone(), 0.0, true).is_err());
        assert!(GeodesicSpec::new(p.clone(), q.clone(), -1.0, true).is_ok());
        let clamped = GeodesicSpec::new_clamped(p, q, 0.0, true).unwrap();
        assert!(clamped.eval(0.5).unwrap().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn out_of_range_parameter_rejected() {
        let g = GeodesicSpec::new(vec![0.5, 0.5], vec![0.4, 0.6], 0.0, true).unwrap();
        assert!(g.eval(1.5).is_err());
    }
}
