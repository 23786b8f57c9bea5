//! Mode runners: each mode computes its artifact, writes it atomically to
//! `<out>/<mode>_<seed>.csv|json`, and reports a one-line summary with a
//! pass/fail verdict.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::checks::{self, CheckResult};
use crate::experiment::config::{ExperimentConfig, Mode};
use crate::mdp::{
    augmented_stationary, empirical_occupancy, mdp_from_json, occupancy, FiniteMdp, Policy,
};
use crate::numeric::format_f64;
use crate::optima::{beta_sweep, closed_form_optimum, numerical_optimum, objective, OptimaProblem};
use crate::policy::{
    default_damping, natural_step, occupancy_objective, pullback_metric, OptimizerState,
    SoftmaxPolicy,
};
use crate::rewards::{shannon_entropy, RewardSpec};

/// Result of one mode run.
#[derive(Debug)]
pub struct RunOutcome {
    /// All assertions of the mode held.
    pub passed: bool,
    /// One-line human summary (also printed by the CLI).
    pub summary: String,
    /// Artifact files written.
    pub outputs: Vec<PathBuf>,
}

/// Write bytes to `path` via a temp file and rename, so readers never see a
/// partial artifact.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn artifact_path(config: &ExperimentConfig, extension: &str) -> PathBuf {
    config
        .out
        .join(format!("{}_{}.{extension}", config.mode.name(), config.seed))
}

fn load_mdp(config: &ExperimentConfig) -> Result<FiniteMdp> {
    let path = config.mdp.as_ref().ok_or_else(|| Error::Config {
        field: "mdp".into(),
        message: "an MDP file is required here".into(),
    })?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        field: "mdp".into(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    mdp_from_json(&text, &path.display().to_string())
}

/// Reward vector and horizon for the optimization modes: inline reward wins,
/// otherwise they come from the MDP file.
fn problem_inputs(config: &ExperimentConfig) -> Result<(Vec<f64>, u32)> {
    if let Some(reward) = &config.reward {
        return Ok((reward.clone(), config.horizon));
    }
    let mdp = load_mdp(config)?;
    Ok((mdp.reward().to_vec(), mdp.horizon()))
}

/// Dispatch a validated configuration.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    match config.mode {
        Mode::Occupancy => run_occupancy(config),
        Mode::Optima => run_optima(config),
        Mode::Sweep => run_sweep(config),
        Mode::Natgrad => run_natgrad(config),
        Mode::Dpi => run_dpi(config),
        Mode::Knn => run_knn(config),
        Mode::Verify => run_verify(config),
    }
}

fn run_occupancy(config: &ExperimentConfig) -> Result<RunOutcome> {
    let mdp = load_mdp(config)?;
    let policy = Policy::uniform(mdp.num_states(), mdp.num_actions());
    let exact = occupancy(&mdp, &policy)?;
    let empirical = empirical_occupancy(&mdp, &policy, config.episodes, config.seed)?;
    let augmented = augmented_stationary(&mdp, &policy, None)?;

    let mut csv = String::from("state,exact,empirical,augmented_marginal\n");
    for s in 0..mdp.num_states() {
        writeln!(
            csv,
            "{s},{},{},{}",
            format_f64(exact.dist[s]),
            format_f64(empirical[s]),
            format_f64(augmented.state_marginal[s]),
        )
        .unwrap();
    }
    let path = artifact_path(config, "csv");
    write_atomic(&path, &csv)?;

    let marginal_gap = exact.dist.l1_distance(&augmented.state_marginal);
    let passed = marginal_gap <= 1e-10 && augmented.invariance_residual <= 1e-12;
    Ok(RunOutcome {
        passed,
        summary: format!(
            "occupancy: augmented-marginal gap {marginal_gap:.3e} (tol 1e-10), invariance {:.3e} (tol 1e-12), {} episodes sampled -> {}",
            augmented.invariance_residual,
            config.episodes,
            path.display()
        ),
        outputs: vec![path],
    })
}

fn run_optima(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (reward, horizon) = problem_inputs(config)?;
    let mut csv =
        String::from("alpha,beta,state,probability_closed_form,probability_numerical,l1_distance\n");
    let mut worst = 0.0f64;
    let mut failing: Option<(f64, f64)> = None;
    for &alpha in &config.alphas {
        for &beta in &config.betas {
            let prob = OptimaProblem::new(reward.clone(), alpha, beta, horizon)?;
            let closed = closed_form_optimum(&prob)?;
            let numerical = numerical_optimum(&prob, 1e-10)?;
            let l1 = closed.l1_distance(&numerical);
            if l1 > worst {
                worst = l1;
            }
            if l1 > config.tolerances.optimum && failing.is_none() {
                failing = Some((alpha, beta));
            }
            for s in 0..reward.len() {
                writeln!(
                    csv,
                    "{},{},{s},{},{},{}",
                    format_f64(alpha),
                    format_f64(beta),
                    format_f64(closed[s]),
                    format_f64(numerical[s]),
                    format_f64(l1),
                )
                .unwrap();
            }
        }
    }
    let path = artifact_path(config, "csv");
    write_atomic(&path, &csv)?;
    let passed = failing.is_none();
    let summary = match failing {
        None => format!(
            "optima: {} cells agree within {:.1e} (max L1 {worst:.3e}) -> {}",
            config.alphas.len() * config.betas.len(),
            config.tolerances.optimum,
            path.display()
        ),
        Some((alpha, beta)) => format!(
            "optima: closed form vs oracle disagree at alpha={alpha}, beta={beta} (L1 {worst:.3e} > {:.1e}) -> {}",
            config.tolerances.optimum,
            path.display()
        ),
    };
    Ok(RunOutcome {
        passed,
        summary,
        outputs: vec![path],
    })
}

fn run_sweep(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (reward, horizon) = problem_inputs(config)?;
    let mut csv = String::from(
        "alpha,beta,state,probability,return_value,divergence_to_uniform,geodesic_residual\n",
    );
    let mut worst = 0.0f64;
    for &alpha in &config.alphas {
        let base = OptimaProblem::new(reward.clone(), alpha, config.betas[0], horizon)?;
        let report = beta_sweep(&base, &config.betas)?;
        worst = worst.max(report.max_residual);
        for point in &report.points {
            for s in 0..reward.len() {
                writeln!(
                    csv,
                    "{},{},{s},{},{},{},{}",
                    format_f64(alpha),
                    format_f64(point.beta),
                    format_f64(point.optimum[s]),
                    format_f64(point.return_value),
                    format_f64(point.divergence_to_uniform),
                    format_f64(point.geodesic_residual),
                )
                .unwrap();
            }
        }
    }
    let path = artifact_path(config, "csv");
    write_atomic(&path, &csv)?;
    let passed = worst <= config.tolerances.geodesic;
    Ok(RunOutcome {
        passed,
        summary: format!(
            "sweep: max geodesic residual {worst:.3e} (tol {:.1e}) over {} orders x {} weights -> {}",
            config.tolerances.geodesic,
            config.alphas.len(),
            config.betas.len(),
            path.display()
        ),
        outputs: vec![path],
    })
}

fn run_natgrad(config: &ExperimentConfig) -> Result<RunOutcome> {
    // Inline rewards run the teleport benchmark against the simplex oracle;
    // an explicit MDP runs plain ascent with a monotonicity contract.
    let (mdp, oracle) = match (&config.reward, &config.mdp) {
        (Some(reward), _) => {
            let mdp = FiniteMdp::teleport(reward.len(), 8, reward.clone())?;
            let prob = OptimaProblem::new(reward.clone(), -1.0, 1.0, 8)?;
            let oracle = objective(&closed_form_optimum(&prob)?, &prob)?;
            (mdp, Some(oracle))
        }
        (None, Some(_)) => (load_mdp(config)?, None),
        (None, None) => unreachable!("validated by config"),
    };
    let spec = RewardSpec::new(
        mdp.reward().to_vec(),
        1.0,
        crate::geometry::GeneratorF::alpha_information(-1.0)?,
        false,
    )?;

    let mut csv = String::from("iteration,objective,grad_norm,step,entropy_of_occupancy\n");
    let mut state = OptimizerState::start(SoftmaxPolicy::zeros(
        mdp.num_states(),
        mdp.num_actions(),
    ));
    state.objective = occupancy_objective(&mdp, &state.policy, &spec)?;
    let step = 1.0;
    let max_iterations = 2000;
    let mut iterations = 0;
    for i in 0..max_iterations {
        let metric = pullback_metric(&mdp, &state.policy, spec.generator())?;
        let damping = default_damping(&metric);
        state = natural_step(&mdp, &state, &spec, step, damping)?;
        let occ = occupancy(&mdp, &state.policy.policy())?;
        writeln!(
            csv,
            "{},{},{},{},{}",
            state.iteration,
            format_f64(state.objective),
            format_f64(state.grad_norm),
            format_f64(state.step_taken),
            format_f64(shannon_entropy(&occ.dist)),
        )
        .unwrap();
        iterations = i + 1;
        let done = match oracle {
            Some(target) => target - state.objective <= 1e-4,
            None => state.converged,
        };
        if done {
            break;
        }
    }
    let path = artifact_path(config, "csv");
    write_atomic(&path, &csv)?;

    let (passed, summary) = match oracle {
        Some(target) => {
            let gap = target - state.objective;
            (
                gap <= 1e-4,
                format!(
                    "natgrad: teleport benchmark gap to oracle {gap:.3e} (tol 1e-4) after {iterations} iterations -> {}",
                    path.display()
                ),
            )
        }
        None => (
            true,
            format!(
                "natgrad: ascent ran {iterations} iterations, final objective {:.6} -> {}",
                state.objective,
                path.display()
            ),
        ),
    };
    Ok(RunOutcome {
        passed,
        summary,
        outputs: vec![path],
    })
}

fn run_dpi(config: &ExperimentConfig) -> Result<RunOutcome> {
    let report = crate::dpi::run_dpi_battery(config.trials, config.seed);
    let path = artifact_path(config, "json");
    write_atomic(&path, &to_pretty_json(&report)?)?;
    Ok(RunOutcome {
        passed: report.pass,
        summary: format!(
            "dpi: {} trials, min gap {:.3e}, equality consistent: {}, convex witness: {} -> {}",
            report.trials,
            report.min_gap,
            report.equality_consistent,
            report.counterexample.is_some(),
            path.display()
        ),
        outputs: vec![path],
    })
}

#[derive(Serialize)]
struct KnnArtifact {
    uniform_box: crate::density::ConsistencyReport,
    gaussian: crate::density::ConsistencyReport,
    pass: bool,
}

fn run_knn(config: &ExperimentConfig) -> Result<RunOutcome> {
    let uniform_box = crate::density::estimator_consistency_report(
        crate::density::SyntheticGenerator::UniformBox { dim: 1 },
        &[100, 1000, 10_000],
        crate::density::KRule::SqrtN,
        config.seed,
    )?;
    let gaussian = crate::density::estimator_consistency_report(
        crate::density::SyntheticGenerator::Gaussian { dim: 2 },
        &[100, 1000, 10_000],
        crate::density::KRule::SqrtN,
        config.seed ^ 1,
    )?;
    let pass = uniform_box.decreasing && gaussian.decreasing;
    let artifact = KnnArtifact {
        uniform_box,
        gaussian,
        pass,
    };
    let path = artifact_path(config, "json");
    write_atomic(&path, &to_pretty_json(&artifact)?)?;
    Ok(RunOutcome {
        passed: pass,
        summary: format!(
            "knn: error curves decreasing: {} -> {}",
            pass,
            path.display()
        ),
        outputs: vec![path],
    })
}

fn run_verify(config: &ExperimentConfig) -> Result<RunOutcome> {
    // A bundled MDP is validated up front: a corrupted file rejects at
    // parse time and the suite never runs.
    if config.mdp.is_some() {
        load_mdp(config)?;
    }
    let mut results = checks::verify_suite(
        config.seed,
        &config.tolerances,
        config.episodes,
        config.trials,
    );
    if let Some(filter) = &config.only {
        results.retain(|r| r.name.contains(filter.as_str()));
        if results.is_empty() {
            return Err(Error::Config {
                field: "only".into(),
                message: format!("no check matches `{filter}`"),
            });
        }
    }
    let path = artifact_path(config, "json");
    write_atomic(&path, &to_pretty_json(&results)?)?;
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.pass).collect();
    let passed = failed.is_empty();
    let summary = if passed {
        format!(
            "verify: {} checks passed, worst margin at {} -> {}",
            results.len(),
            results
                .iter()
                .max_by(|a, b| {
                    (a.residual / a.tolerance).total_cmp(&(b.residual / b.tolerance))
                })
                .map(|r| r.name.as_str())
                .unwrap_or("none"),
            path.display()
        )
    } else {
        format!(
            "verify: {}/{} checks FAILED: {} -> {}",
            failed.len(),
            results.len(),
            failed
                .iter()
                .map(|r| r.name.as_str())
                .collect::<Vec<_>>()
                .join(", "),
            path.display()
        )
    };
    Ok(RunOutcome {
        passed,
        summary,
        outputs: vec![path],
    })
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
