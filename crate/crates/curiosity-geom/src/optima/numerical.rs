//! Brute-force simplex maximization by entropic mirror ascent.
//!
//! Multiplicative-weights updates stay interior and respect the simplex
//! geometry: `p <- p ⊙ exp(step * g) / Z` with the centered gradient `g`.
//! Armijo backtracking guarantees monotone objective improvement; the
//! stationarity measure is the mirror-geometry projected gradient
//! `‖p ⊙ (∇ - Σ p ∇)‖₂`, which vanishes at interior optima and at vertex
//! limits alike. Restarts from random interior points make this an oracle
//! that is independent of the closed-form solution path.

use crate::error::{Error, Result};
use crate::numeric::max_abs;
use crate::optima::{objective, objective_gradient, OptimaProblem};
use crate::rng::{sample_interior_simplex, stream_rng};
use crate::simplex::Distribution;

/// Knobs for the mirror ascent oracle. Defaults match the verification
/// batteries: ten random restarts, tight stationarity, generous iteration cap.
#[derive(Debug, Clone)]
pub struct NumericalOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for NumericalOptions {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iterations: 100_000,
            seed: 0x5eed,
        }
    }
}

fn mirror_ascent(
    start: Vec<f64>,
    prob: &OptimaProblem,
    tol: f64,
    max_iterations: usize,
) -> Result<(Vec<f64>, f64, f64)> {
    let mut p = start;
    let mut value = objective(&Distribution::new(p.clone())?, prob)?;
    let mut step = 1.0;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iterations {
        let grad = objective_gradient(&p, prob)?;
        let avg: f64 = p.iter().zip(&grad).map(|(pi, gi)| pi * gi).sum();
        let centered: Vec<f64> = grad.iter().map(|g| g - avg).collect();
        residual = p
            .iter()
            .zip(&centered)
            .map(|(pi, ci)| (pi * ci).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale = max_abs(&grad).max(1.0);
        if residual <= tol * scale {
            return Ok((p, value, residual));
        }

        // Backtracking multiplicative-weights step. Strict improvement is
        // required: once gains fall below float resolution the step shrinks
        // to the floor and the loop exits with the best point found.
        let mut accepted = false;
        while step >= 1e-12 {
            let normalizer = max_abs(&centered).max(1e-300);
            let candidate: Vec<f64> = p
                .iter()
                .zip(&centered)
                .map(|(pi, ci)| pi * (step * ci / normalizer).exp())
                .collect();
            let candidate = Distribution::normalized(candidate)?;
            let cand_value = objective(&candidate, prob)?;
            let gain: f64 = candidate
                .weights()
                .iter()
                .zip(&p)
                .zip(&grad)
                .map(|((ci, pi), gi)| (ci - pi) * gi)
                .sum();
            if cand_value > value && cand_value >= value + 1e-4 * gain.max(0.0) {
                p = candidate.into_weights();
                value = cand_value;
                step = (step * 2.0).min(1e6);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // Step floor reached: converged at float resolution.
            return Ok((p, value, residual));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual,
        tolerance: tol,
    })
}

/// Maximize the objective over the simplex from multiple random interior
/// starts, returning the best point found. Each start runs until the
/// projected-gradient residual falls below `tol` (relative to the gradient
/// scale) or objective improvements stall at float resolution.
pub fn numerical_optimum(prob: &OptimaProblem, tol: f64) -> Result<Distribution> {
    numerical_optimum_with(prob, tol, &NumericalOptions::default())
}

/// As [`numerical_optimum`] with explicit options.
pub fn numerical_optimum_with(
    prob: &OptimaProblem,
    tol: f64,
    options: &NumericalOptions,
) -> Result<Distribution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = prob.dim();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for restart in 0..options.restarts.max(1) {
        let start = if restart == 0 {
            vec![1.0 / d as f64; d]
        } else {
            let mut rng = stream_rng(options.seed, restart as u64);
            sample_interior_simplex(&mut rng, d, 0.05)
        };
        let (p, value, _) = mirror_ascent(start, prob, tol, options.max_iterations)?;
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((p, value));
        }
    }
    let (p, _) = best.expect("at least one restart");
    Distribution::new(p)
}
