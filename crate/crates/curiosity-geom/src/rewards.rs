//! Information values and intrinsic reward vectors.
//!
//! The information carried by observing state `s` under a belief `p` is
//! `I_f(s;p) = f(1/p(s))` for a strictly concave generator `f`. The built-in
//! family
//!
//! ```text
//! I_alpha(s;p) = 4/(1-alpha^2) * ((1/p(s))^((alpha+1)/2) - 1)
//! ```
//!
//! recovers surprisal `-log p(s)` at alpha = -1, where its occupancy average
//! is the Shannon entropy, and at alpha = 0 it is an affine function of the
//! reciprocal square-root visit count — the classic exploration bonus.

use crate::error::{Error, Result};
use crate::geometry::generator::GeneratorF;
use crate::simplex::Distribution;

/// Intrinsic reward specification: extrinsic rewards plus a scaled
/// information term.
#[derive(Debug, Clone)]
pub struct RewardSpec {
    extrinsic: Vec<f64>,
    beta: f64,
    generator: GeneratorF,
    adjust: bool,
}

impl RewardSpec {
    /// Build a specification. `beta` must be non-negative and the generator
    /// strictly concave (spot-checked by sampled second differences).
    pub fn new(extrinsic: Vec<f64>, beta: f64, generator: GeneratorF, adjust: bool) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beta must be non-negative, got {beta}"
            )));
        }
        if extrinsic.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidArgument("non-finite extrinsic reward".into()));
        }
        if !generator.is_concave_sampled() {
            return Err(Error::InvalidArgument(
                "information generator must be strictly concave".into(),
            ));
        }
        Ok(Self {
            extrinsic,
            beta,
            generator,
            adjust,
        })
    }

    pub fn extrinsic(&self) -> &[f64] {
        &self.extrinsic
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn generator(&self) -> &GeneratorF {
        &self.generator
    }

    pub fn adjust(&self) -> bool {
        self.adjust
    }

    /// Overall scale applied to the reward vector: `1/|f''(1)|` when the
    /// curvature adjustment is enabled, 1 otherwise. Identity for the alpha
    /// family, whose curvature is normalized to one.
    pub fn scale(&self) -> f64 {
        if self.adjust {
            1.0 / self.generator.metric_scale()
        } else {
            1.0
        }
    }
}

/// Information of state `s` under `p`: `f(1/p_s)`. Zero-probability states
/// carry the generator's limit at infinity (`+inf` when it diverges).
pub fn f_information(p: &Distribution, s: usize, f: &GeneratorF) -> f64 {
    f_information_value(p[s], f)
}

/// Scalar form of [`f_information`] for a raw probability (or density) value.
pub fn f_information_value(prob: f64, f: &GeneratorF) -> f64 {
    if prob <= 0.0 {
        // Classify the generator's tail by probing two huge arguments: still
        // growing (even logarithmically) means the information diverges.
        let a = f.eval(1e250);
        let b = f.eval(1e300);
        if !b.is_finite() || (b - a).abs() > 1e-6 * (a.abs() + 1.0) {
            return if b >= a {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        return b;
    }
    f.eval(1.0 / prob)
}

/// Alpha-information of state `s`, with the exact `-log` branch at
/// alpha = -1. Rejects alpha = 1, where the information diverges.
pub fn alpha_information(p: &Distribution, s: usize, alpha: f64) -> Result<f64> {
    alpha_information_value(p[s], alpha)
}

/// Scalar form of [`alpha_information`].
pub fn alpha_information_value(prob: f64, alpha: f64) -> Result<f64> {
    let f = GeneratorF::alpha_information(alpha)?;
    Ok(f_information_value(prob, &f))
}

/// Componentwise `r_s + beta * f(1/p_s)`, multiplied by `1/f''(1)` when the
/// spec enables the curvature adjustment. Requires a strictly positive
/// occupancy; callers own any smoothing of empirical estimates.
pub fn intrinsic_reward_vector(p: &Distribution, spec: &RewardSpec) -> Result<Vec<f64>> {
    crate::simplex::check_same_dim(spec.extrinsic.len(), p.dim())?;
    if !p.is_interior() {
        return Err(Error::InvalidWeights {
            context: "intrinsic reward".into(),
            reason: "occupancy has a zero entry; smooth or clamp it before rewarding".into(),
        });
    }
    let scale = spec.scale();
    Ok(p.weights()
        .iter()
        .zip(&spec.extrinsic)
        .map(|(&ps, &rs)| scale * (rs + spec.beta * spec.generator.eval(1.0 / ps)))
        .collect())
}

/// Evaluate the zero-order information both from the occupancy
/// `p_s = n(s)/(n+1)` and from the visit-count formula
/// `sqrt(16 (n+1)/n(s)) - 4`; the two routes agree identically.
///
/// `total` must equal the sum of counts and every count must be positive.
pub fn count_bonus_identity(counts: &[u64], total: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if counts.iter().sum::<u64>() != total {
        return Err(Error::InvalidArgument(format!(
            "total {total} does not match the count sum {}",
            counts.iter().sum::<u64>()
        )));
    }
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidArgument(format!(
            "count[{i}] = 0: information is undefined at probability zero"
        )));
    }
    let occupancy = Distribution::normalized(counts.iter().map(|&c| c as f64).collect())?;
    let via_information: Vec<f64> = (0..counts.len())
        .map(|s| alpha_information(&occupancy, s, 0.0))
        .collect::<Result<_>>()?;
    let via_counts: Vec<f64> = counts
        .iter()
        .map(|&c| (16.0 * total as f64 / c as f64).sqrt() - 4.0)
        .collect();
    Ok((via_information, via_counts))
}

/// Shannon entropy `Σ p_s log(1/p_s)` in nats, with `0 log(1/0) = 0`.
pub fn shannon_entropy(p: &Distribution) -> f64 {
    p.weights()
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| -w * w.ln())
        .sum()
}
