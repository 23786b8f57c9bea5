//! Tabular softmax policies and natural-gradient ascent in occupancy
//! geometry.

mod concavity;
mod jacobian;
mod natural;

pub use concavity::geodesic_concavity_check;
pub use jacobian::{occupancy_jacobian, occupancy_jacobian_fd};
pub use natural::{
    default_damping, natural_step, occupancy_objective, pullback_metric,
    vanilla_policy_gradient_step,
};

use crate::error::Result;
use crate::mdp::Policy;
use crate::simplex::Distribution;

/// A policy parameterized by per-state softmax logits.
#[derive(Debug, Clone)]
pub struct SoftmaxPolicy {
    logits: Vec<Vec<f64>>,
}

impl SoftmaxPolicy {
    pub fn new(logits: Vec<Vec<f64>>) -> Result<Self> {
        if logits.is_empty() || logits[0].is_empty() {
            return Err(crate::error::Error::InvalidArgument(
                "softmax policy needs at least one state and action".into(),
            ));
        }
        let m = logits[0].len();
        for row in &logits {
            crate::simplex::check_same_dim(row.len(), m)?;
        }
        Ok(Self { logits })
    }

    pub fn zeros(num_states: usize, num_actions: usize) -> Self {
        Self {
            logits: vec![vec![0.0; num_actions]; num_states],
        }
    }

    pub fn num_states(&self) -> usize {
        self.logits.len()
    }

    pub fn num_actions(&self) -> usize {
        self.logits[0].len()
    }

    pub fn logits(&self) -> &[Vec<f64>] {
        &self.logits
    }

    /// Row-wise softmax table.
    pub fn policy(&self) -> Policy {
        let rows = self
            .logits
            .iter()
            .map(|row| {
                let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = row.iter().map(|x| (x - max).exp()).collect();
                Distribution::normalized(exps).expect("softmax rows are positive")
            })
            .collect();
        Policy::new(rows).expect("non-empty logit table")
    }

    /// Flat parameter update: `logits[s][a] += delta[s * m + a]`.
    pub fn offset(&self, delta: &[f64], scale: f64) -> Self {
        let m = self.num_actions();
        let logits = self
            .logits
            .iter()
            .enumerate()
            .map(|(s, row)| {
                row.iter()
                    .enumerate()
                    .map(|(a, &x)| x + scale * delta[s * m + a])
                    .collect()
            })
            .collect();
        Self { logits }
    }
}

/// Progress record of one optimizer run.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub policy: SoftmaxPolicy,
    pub iteration: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub damping: f64,
    /// Step length accepted by the last backtracking search (0 when the
    /// parameters did not move).
    pub step_taken: f64,
    /// Set when backtracking hit the step floor without improvement.
    pub converged: bool,
}

impl OptimizerState {
    pub fn start(policy: SoftmaxPolicy) -> Self {
        Self {
            policy,
            iteration: 0,
            objective: f64::NEG_INFINITY,
            grad_norm: f64::INFINITY,
            damping: 0.0,
            step_taken: 0.0,
            converged: false,
        }
    }
}
