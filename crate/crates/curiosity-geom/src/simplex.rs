//! Points of the probability simplex and of the positive orthant.
//!
//! A [`Distribution`] is a validated probability vector; a
//! [`PositiveMeasure`] is an unnormalized vector of strictly positive
//! weights. Tangent vectors at simplex points are represented as
//! full-dimension vectors constrained to sum to zero, with no chart
//! bookkeeping.

use crate::error::{Error, Result};

/// Tolerance for the simplex normalization invariant.
pub const SIMPLEX_SUM_TOL: f64 = 1e-10;

/// A probability vector: non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validate and wrap a weight vector. The sum must be within
    /// [`SIMPLEX_SUM_TOL`] of one and every weight non-negative.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights {
                context: "distribution".into(),
                reason: "empty weight vector".into(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeights {
                    context: "distribution".into(),
                    reason: format!("weight[{i}] = {w} is negative or non-finite"),
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::InvalidWeights {
                context: "distribution".into(),
                reason: format!("weights sum to {sum:.12}, expected 1"),
            });
        }
        Ok(Self { weights })
    }

    /// Normalize an arbitrary non-negative vector onto the simplex.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 {
            return Err(Error::InvalidWeights {
                context: "distribution".into(),
                reason: format!("weights sum to {sum}, cannot normalize"),
            });
        }
        for w in &mut weights {
            *w /= sum;
        }
        Self::new(weights)
    }

    /// Uniform distribution over `dim` states.
    pub fn uniform(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            weights: vec![1.0 / dim as f64; dim],
        }
    }

    /// Point mass on `state`.
    pub fn point_mass(dim: usize, state: usize) -> Self {
        assert!(state < dim);
        let mut weights = vec![0.0; dim];
        weights[state] = 1.0;
        Self { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    /// True when every weight is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        crate::numeric::l1_distance(&self.weights, &other.weights)
    }
}

impl std::ops::Deref for Distribution {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.weights
    }
}

/// An unnormalized vector of strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMeasure {
    weights: Vec<f64>,
}

impl PositiveMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights {
                context: "positive measure".into(),
                reason: "empty weight vector".into(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidWeights {
                    context: "positive measure".into(),
                    reason: format!("weight[{i}] = {w} is not strictly positive"),
                });
            }
        }
        Ok(Self { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Rescale onto the simplex.
    pub fn to_distribution(&self) -> Distribution {
        let total = self.total_mass();
        Distribution {
            weights: self.weights.iter().map(|w| w / total).collect(),
        }
    }
}

impl std::ops::Deref for PositiveMeasure {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.weights
    }
}

pub(crate) fn check_same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_weight() {
        assert!(Distribution::new(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn rejects_bad_sum() {
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![0.5, 0.5 + 2e-10]).is_err());
        assert!(Distribution::new(vec![0.5, 0.5 + 5e-12]).is_ok());
    }

    #[test]
    fn normalizes() {
        let d = Distribution::normalized(vec![2.0, 6.0]).unwrap();
        assert_eq!(d.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn positive_measure_rejects_zero() {
        assert!(PositiveMeasure::new(vec![1.0, 0.0]).is_err());
        assert!(PositiveMeasure::new(vec![0.3, 2.5]).is_ok());
    }

    #[test]
    fn point_mass_and_uniform() {
        assert_eq!(Distribution::point_mass(3, 1).weights(), &[0.0, 1.0, 0.0]);
        assert!(Distribution::uniform(4).is_interior());
    }
}
