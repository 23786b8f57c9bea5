//! Divergences on weight vectors: the alpha family, generic f-divergences,
//! and Renyi divergences.
//!
//! All functions accept plain weight slices so they apply equally to
//! [`crate::Distribution`] and [`crate::PositiveMeasure`] points. Divergent
//! integrals caused by zero weights are reported as `+inf`, not as errors.

use crate::error::{Error, Result};
use crate::geometry::generator::GeneratorF;
use crate::simplex::check_same_dim;

/// Orders closer to +/-1 than this use the exact Kullback-Leibler branch;
/// the generic power formula is numerically stable outside it.
const ALPHA_BRANCH_TOL: f64 = 1e-12;

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    check_same_dim(p.len(), q.len())?;
    if p.len() < 2 {
        return Err(Error::InvalidArgument(
            "divergences need at least two states".into(),
        ));
    }
    Ok(())
}

/// Kullback-Leibler divergence `Σ p log(p/q)` in nats, with `0 log(0/q) = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total)
}

/// The alpha-divergence
///
/// ```text
/// D_alpha(p‖q) = 4/(1-alpha^2) * (1 - Σ p^((1-alpha)/2) q^((1+alpha)/2))
/// ```
///
/// with exact branches `D_{-1} = KL(p‖q)` and `D_{+1} = KL(q‖p)`. At
/// alpha = 0 this is twice the squared Hellinger distance and symmetric.
/// The generic formula amplifies rounding by `4/(1-alpha^2)` and is
/// numerically stable for `|alpha -/+ 1| >= 1e-4`; identical arguments
/// return zero exactly at every order.
pub fn alpha_divergence(p: &[f64], q: &[f64], alpha: f64) -> Result<f64> {
    check_pair(p, q)?;
    if p == q {
        return Ok(0.0);
    }
    if (alpha + 1.0).abs() < ALPHA_BRANCH_TOL {
        return kl_divergence(p, q);
    }
    if (alpha - 1.0).abs() < ALPHA_BRANCH_TOL {
        return kl_divergence(q, p);
    }
    let ep = (1.0 - alpha) / 2.0;
    let eq = (1.0 + alpha) / 2.0;
    let mut integral = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 || qi == 0.0 {
            // x^e with x = 0: zero for positive exponents, divergent below.
            if (pi == 0.0 && ep < 0.0) || (qi == 0.0 && eq < 0.0) {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        integral += pi.powf(ep) * qi.powf(eq);
    }
    Ok(4.0 / (1.0 - alpha * alpha) * (1.0 - integral))
}

/// Generic f-divergence `D_f(p‖q) = Σ p f(q/p)` for a convex generator.
///
/// States with `p = 0` contribute the measure-theoretic limit
/// `q * lim f(x)/x` as `x → inf` (zero for the alpha family with
/// `alpha < 1`, divergent for the steeper generators).
pub fn f_divergence(p: &[f64], q: &[f64], f: &GeneratorF) -> Result<f64> {
    check_pair(p, q)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            if qi == 0.0 {
                continue;
            }
            // Evaluate q * f(q/p)/(q/p) at a huge ratio to classify the tail.
            let tail = qi * f.eval(1e300) / 1e300;
            if !tail.is_finite() || tail.abs() > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        let ratio = qi / pi;
        if ratio == 0.0 {
            let at_zero = f.eval(0.0);
            if !at_zero.is_finite() {
                return Ok(f64::INFINITY);
            }
            total += pi * at_zero;
            continue;
        }
        total += pi * f.eval(ratio);
    }
    Ok(total)
}

/// Renyi divergence `D_lambda(p‖q) = 1/(lambda-1) log Σ p^lambda q^(1-lambda)`
/// in nats; `lambda = 1` falls back to the Kullback-Leibler limit.
pub fn renyi_divergence(p: &[f64], q: &[f64], lambda: f64) -> Result<f64> {
    check_pair(p, q)?;
    if (lambda - 1.0).abs() < ALPHA_BRANCH_TOL {
        return kl_divergence(p, q);
    }
    let mut integral = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 || qi == 0.0 {
            if (pi == 0.0 && lambda < 0.0) || (qi == 0.0 && lambda > 1.0 && pi > 0.0) {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        integral += pi.powf(lambda) * qi.powf(1.0 - lambda);
    }
    if integral <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(integral.ln() / (lambda - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{master_rng, sample_interior_simplex};

    const P: [f64; 2] = [0.5, 0.5];
    const Q: [f64; 2] = [0.25, 0.75];

    #[test]
    fn identity_is_zero_for_any_order() {
        let mut rng = master_rng(11);
        for _ in 0..20 {
            let p = sample_interior_simplex(&mut rng, 4, 0.01);
            for a in [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
                assert!(alpha_divergence(&p, &p, a).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kl_branch_matches_direct_sum() {
        // Frozen oracle: KL((1/2,1/2) ‖ (1/4,3/4)) = 0.5 ln(4/3).
        let expected = 0.143_841_036_225_890_2;
        assert!((kl_divergence(&P, &Q).unwrap() - expected).abs() < 1e-12);
        assert!((alpha_divergence(&P, &Q, -1.0).unwrap() - expected).abs() < 1e-12);
        assert!((alpha_divergence(&Q, &P, 1.0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn hellinger_form_at_zero_order() {
        // D_0 equals 4 (1 - Σ sqrt(pq)) = 2 Σ (sqrt(p) - sqrt(q))^2; on an
        // orthogonal pair the integral vanishes.
        let d = alpha_divergence(&[1.0, 0.0], &[0.0, 1.0], 0.0).unwrap();
        assert!((d - 4.0).abs() < 1e-12);
        let direct: f64 = P
            .iter()
            .zip(Q)
            .map(|(&pi, qi)| (pi.sqrt() - qi.sqrt()).powi(2))
            .sum();
        assert!((alpha_divergence(&P, &Q, 0.0).unwrap() - 2.0 * direct).abs() < 1e-14);
    }

    #[test]
    fn zero_order_is_symmetric() {
        let d_pq = alpha_divergence(&P, &Q, 0.0).unwrap();
        let d_qp = alpha_divergence(&Q, &P, 0.0).unwrap();
        assert!((d_pq - d_qp).abs() < 1e-15);
        // Asymmetry witness at the KL orders.
        let a_pq = alpha_divergence(&P, &Q, -1.0).unwrap();
        let a_qp = alpha_divergence(&Q, &P, -1.0).unwrap();
        assert!((a_pq - a_qp).abs() > 1e-3);
    }

    #[test]
    fn limit_consistency_near_kl_orders() {
        let mut rng = master_rng(3);
        for _ in 0..20 {
            let p = sample_interior_simplex(&mut rng, 5, 0.01);
            let q = sample_interior_simplex(&mut rng, 5, 0.01);
            let kl_pq = kl_divergence(&p, &q).unwrap();
            let kl_qp = kl_divergence(&q, &p).unwrap();
            assert!((alpha_divergence(&p, &q, -1.0 + 1e-5).unwrap() - kl_pq).abs() <= 1e-4);
            assert!((alpha_divergence(&p, &q, 1.0 - 1e-5).unwrap() - kl_qp).abs() <= 1e-4);
        }
    }

    #[test]
    fn f_divergence_agrees_with_alpha_family() {
        let mut rng = master_rng(4);
        for _ in 0..20 {
            let p = sample_interior_simplex(&mut rng, 6, 0.01);
            let q = sample_interior_simplex(&mut rng, 6, 0.01);
            for a in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let via_f = f_divergence(&p, &q, &GeneratorF::alpha(a)).unwrap();
                let direct = alpha_divergence(&p, &q, a).unwrap();
                assert!((via_f - direct).abs() < 1e-12, "alpha = {a}");
            }
        }
    }

    #[test]
    fn f_divergence_vanishes_at_equal_arguments() {
        let f = GeneratorF::custom(|x| (x - 1.0) * (x - 1.0), |x| 2.0 * (x - 1.0), 2.0, "chi2");
        assert!(f_divergence(&P, &P, &f).unwrap().abs() < 1e-15);
    }

    #[test]
    fn renyi_frozen_values() {
        // lambda = 2: log Σ p^2/q = log(4/3).
        let expected = 0.287_682_072_451_780_9;
        assert!((renyi_divergence(&P, &Q, 2.0).unwrap() - expected).abs() < 1e-12);
        // lambda = 1/2 equals -2 log Σ sqrt(pq).
        let bc: f64 = P.iter().zip(Q).map(|(&pi, qi)| (pi * qi).sqrt()).sum();
        assert!((renyi_divergence(&P, &Q, 0.5).unwrap() + 2.0 * bc.ln()).abs() < 1e-12);
        assert!(renyi_divergence(&P, &P, 0.7).unwrap().abs() < 1e-15);
    }

    #[test]
    fn renyi_monotone_relation_to_alpha_divergence() {
        // D_lambda(p‖q) = 1/(lambda-1) log[1 + lambda (lambda-1) D_alpha(q‖p)]
        // at alpha = 2 lambda - 1 (the transposed arguments match the power
        // assignment of the alpha family used here).
        let mut rng = master_rng(5);
        for _ in 0..20 {
            let p = sample_interior_simplex(&mut rng, 4, 0.01);
            let q = sample_interior_simplex(&mut rng, 4, 0.01);
            for lambda in [0.3, 0.5, 2.0] {
                let alpha = 2.0 * lambda - 1.0;
                let renyi = renyi_divergence(&p, &q, lambda).unwrap();
                let dalpha = alpha_divergence(&q, &p, alpha).unwrap();
                let related = (1.0 + lambda * (lambda - 1.0) * dalpha).ln() / (lambda - 1.0);
                assert!((renyi - related).abs() < 1e-10, "lambda = {lambda}");
            }
        }
    }

    #[test]
    fn zero_weights_divergent_cases_report_infinity() {
        // q has an empty state where p has mass: KL diverges.
        assert_eq!(
            kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            alpha_divergence(&[0.5, 0.5], &[1.0, 0.0], -1.0).unwrap(),
            f64::INFINITY
        );
        // alpha > 1 places a negative power on p.
        assert_eq!(
            alpha_divergence(&[0.0, 1.0], &[0.5, 0.5], 2.0).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            renyi_divergence(&[0.5, 0.5], &[1.0, 0.0], 2.0).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(alpha_divergence(&[0.5, 0.5], &[1.0], 0.0).is_err());
    }
}
