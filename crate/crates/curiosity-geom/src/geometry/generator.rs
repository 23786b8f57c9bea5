//! Divergence and information generators.
//!
//! A generator is a scalar function `f` with `f(1) = 0`. Convex generators
//! induce divergences `D_f(p‖q) = Σ p f(q/p)`; strictly concave generators
//! play the dual role of information functions `I_f(s;p) = f(1/p(s))`.
//!
//! The built-in one-parameter family interpolates the classical cases:
//!
//! ```text
//! f_alpha(x) = 4/(1-alpha^2) * (1 - x^((alpha+1)/2))
//! ```
//!
//! with exact limit branches `f_{-1}(x) = -log x` and `f_{+1}(x) = x log x`
//! (the induced divergences are the two Kullback-Leibler orientations, and
//! alpha = 0 gives the Hellinger-type divergence). The information form is
//! the negation of `f_alpha`, recovering `log x` at alpha = -1.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Threshold below which `|alpha -/+ 1|` switches to the exact limit branch.
const ALPHA_BRANCH_TOL: f64 = 1e-12;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A divergence/information generator: evaluation, first derivative, and the
/// curvature scalar `f''(1)`.
#[derive(Clone)]
pub enum GeneratorF {
    /// Convex divergence generator `f_alpha`.
    Alpha { alpha: f64 },
    /// Concave information generator: the negation of `f_alpha`.
    AlphaInformation { alpha: f64 },
    /// Power generator `(x^lambda - 1)/lambda`, whose induced divergence is a
    /// strictly monotone transform of the order-`lambda` Renyi divergence.
    RenyiPower { lambda: f64 },
    /// User-supplied generator.
    Custom {
        eval: ScalarFn,
        deriv: ScalarFn,
        fpp1: f64,
        label: &'static str,
    },
}

impl std::fmt::Debug for GeneratorF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorF::Alpha { alpha } => write!(f, "Alpha({alpha})"),
            GeneratorF::AlphaInformation { alpha } => write!(f, "AlphaInformation({alpha})"),
            GeneratorF::RenyiPower { lambda } => write!(f, "RenyiPower({lambda})"),
            GeneratorF::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

/// `f_alpha(x)` with exact limit branches at alpha = -1 and alpha = +1.
fn f_alpha_eval(alpha: f64, x: f64) -> f64 {
    if (alpha + 1.0).abs() < ALPHA_BRANCH_TOL {
        -x.ln()
    } else if (alpha - 1.0).abs() < ALPHA_BRANCH_TOL {
        x * x.ln()
    } else {
        4.0 / (1.0 - alpha * alpha) * (1.0 - x.powf((alpha + 1.0) / 2.0))
    }
}

/// `f_alpha'(x)` with the matching limit branches.
fn f_alpha_deriv(alpha: f64, x: f64) -> f64 {
    if (alpha + 1.0).abs() < ALPHA_BRANCH_TOL {
        -1.0 / x
    } else if (alpha - 1.0).abs() < ALPHA_BRANCH_TOL {
        x.ln() + 1.0
    } else {
        -(2.0 / (1.0 - alpha)) * x.powf((alpha - 1.0) / 2.0)
    }
}

impl GeneratorF {
    /// Convex divergence generator for the given order.
    pub fn alpha(alpha: f64) -> Self {
        GeneratorF::Alpha { alpha }
    }

    /// Concave information generator for the given order. Rejects
    /// `alpha = 1`, where the information diverges.
    pub fn alpha_information(alpha: f64) -> Result<Self> {
        if (alpha - 1.0).abs() < ALPHA_BRANCH_TOL {
            return Err(Error::InvalidArgument(
                "information diverges at alpha = 1".into(),
            ));
        }
        Ok(GeneratorF::AlphaInformation { alpha })
    }

    /// Power generator monotonically tied to the Renyi divergence of order
    /// `lambda` (`lambda` must differ from 0 and 1).
    pub fn renyi_power(lambda: f64) -> Result<Self> {
        if lambda.abs() < ALPHA_BRANCH_TOL || (lambda - 1.0).abs() < ALPHA_BRANCH_TOL {
            return Err(Error::InvalidArgument(
                "Renyi power generator requires lambda outside {0, 1}".into(),
            ));
        }
        Ok(GeneratorF::RenyiPower { lambda })
    }

    /// Wrap caller-provided closures. `fpp1` is the second derivative at 1.
    pub fn custom(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        fpp1: f64,
        label: &'static str,
    ) -> Self {
        GeneratorF::Custom {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            fpp1,
            label,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            GeneratorF::Alpha { alpha } => f_alpha_eval(*alpha, x),
            GeneratorF::AlphaInformation { alpha } => -f_alpha_eval(*alpha, x),
            GeneratorF::RenyiPower { lambda } => (x.powf(*lambda) - 1.0) / lambda,
            GeneratorF::Custom { eval, .. } => eval(x),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            GeneratorF::Alpha { alpha } => f_alpha_deriv(*alpha, x),
            GeneratorF::AlphaInformation { alpha } => -f_alpha_deriv(*alpha, x),
            GeneratorF::RenyiPower { lambda } => x.powf(lambda - 1.0),
            GeneratorF::Custom { deriv, .. } => deriv(x),
        }
    }

    /// Second derivative at 1. The alpha family is normalized so this is
    /// exactly +/-1.
    pub fn fpp1(&self) -> f64 {
        match self {
            GeneratorF::Alpha { .. } => 1.0,
            GeneratorF::AlphaInformation { .. } => -1.0,
            GeneratorF::RenyiPower { lambda } => lambda - 1.0,
            GeneratorF::Custom { fpp1, .. } => *fpp1,
        }
    }

    /// Positive metric scale `|f''(1)|` induced on the Fisher-Rao tensor.
    pub fn metric_scale(&self) -> f64 {
        self.fpp1().abs()
    }

    /// The order when this is an alpha-family generator (either form).
    pub fn alpha_order(&self) -> Option<f64> {
        match self {
            GeneratorF::Alpha { alpha } | GeneratorF::AlphaInformation { alpha } => Some(*alpha),
            _ => None,
        }
    }

    /// Spot-check strict concavity by sampled second differences on a log
    /// grid over (0, inf). Used to validate information generators.
    pub fn is_concave_sampled(&self) -> bool {
        let h = 1e-4;
        (-40..=40).map(|i| (0.1 * i as f64).exp()).all(|x| {
            let dd = self.eval(x - h) - 2.0 * self.eval(x) + self.eval(x + h);
            dd < 0.0
        })
    }
}
