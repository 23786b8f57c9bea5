//! Experiment configuration: TOML file plus command-line overrides.
//!
//! Precedence is flags > file > defaults. Validation happens before any
//! computation and reports the offending field.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Execution mode of the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Occupancy,
    Optima,
    Sweep,
    Natgrad,
    Dpi,
    Knn,
    Verify,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Occupancy => "occupancy",
            Mode::Optima => "optima",
            Mode::Sweep => "sweep",
            Mode::Natgrad => "natgrad",
            Mode::Dpi => "dpi",
            Mode::Knn => "knn",
            Mode::Verify => "verify",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "occupancy" => Ok(Mode::Occupancy),
            "optima" => Ok(Mode::Optima),
            "sweep" => Ok(Mode::Sweep),
            "natgrad" => Ok(Mode::Natgrad),
            "dpi" => Ok(Mode::Dpi),
            "knn" => Ok(Mode::Knn),
            "verify" => Ok(Mode::Verify),
            other => Err(Error::Config {
                field: "mode".into(),
                message: format!(
                    "unknown mode `{other}` (expected occupancy|optima|sweep|natgrad|dpi|knn|verify)"
                ),
            }),
        }
    }
}

/// Solver and verification tolerances.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_optimum_tol")]
    pub optimum: f64,
    #[serde(default = "default_geodesic_tol")]
    pub geodesic: f64,
    #[serde(default = "default_gradient_tol")]
    pub gradient: f64,
}

fn default_optimum_tol() -> f64 {
    1e-6
}
fn default_geodesic_tol() -> f64 {
    1e-5
}
fn default_gradient_tol() -> f64 {
    1e-5
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            optimum: default_optimum_tol(),
            geodesic: default_geodesic_tol(),
            gradient: default_gradient_tol(),
        }
    }
}

/// The on-disk config document; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    mode: Option<String>,
    mdp: Option<PathBuf>,
    reward: Option<Vec<f64>>,
    horizon: Option<u32>,
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<f64>>,
    episodes: Option<u64>,
    trials: Option<usize>,
    out: Option<PathBuf>,
    only: Option<String>,
    tolerances: Option<Tolerances>,
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub mode: Mode,
    pub mdp: Option<PathBuf>,
    pub reward: Option<Vec<f64>>,
    pub horizon: u32,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub episodes: u64,
    pub trials: usize,
    pub out: PathBuf,
    pub only: Option<String>,
    pub tolerances: Tolerances,
}

/// Command-line overrides (flags beat file values).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub mdp: Option<PathBuf>,
    pub reward: Option<Vec<f64>>,
    pub alphas: Option<Vec<f64>>,
    pub betas: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub only: Option<String>,
}

impl ExperimentConfig {
    /// Resolve mode + optional config file + flag overrides into a validated
    /// configuration.
    pub fn resolve(mode: Mode, config_path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let file: ConfigFile = match config_path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                    field: "config".into(),
                    message: format!("cannot read {}: {e}", path.display()),
                })?;
                toml::from_str(&text).map_err(|e| Error::Config {
                    field: "config".into(),
                    message: format!("{}: {e}", path.display()),
                })?
            }
            None => ConfigFile::default(),
        };
        // A `mode` key in the file must agree with the subcommand.
        if let Some(file_mode) = &file.mode {
            let parsed: Mode = file_mode.parse()?;
            if parsed != mode {
                return Err(Error::Config {
                    field: "mode".into(),
                    message: format!(
                        "config file says `{file_mode}` but the command line asked for `{}`",
                        mode.name()
                    ),
                });
            }
        }

        let config = Self {
            seed: overrides.seed.or(file.seed).unwrap_or(42),
            mode,
            mdp: overrides.mdp.clone().or(file.mdp),
            reward: overrides.reward.clone().or(file.reward),
            horizon: file.horizon.unwrap_or(0),
            alphas: overrides
                .alphas
                .clone()
                .or(file.alpha)
                .unwrap_or_else(|| vec![-1.0, -0.5, 0.0, 0.5]),
            betas: overrides
                .betas
                .clone()
                .or(file.beta)
                .unwrap_or_else(|| vec![0.1, 0.3, 1.0, 3.0, 10.0]),
            episodes: file.episodes.unwrap_or(50_000),
            trials: file.trials.unwrap_or(1000),
            out: overrides
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("out")),
            only: overrides.only.clone().or(file.only),
            tolerances: file.tolerances.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let field_err = |field: &str, message: String| Error::Config {
            field: field.into(),
            message,
        };
        if let Some(reward) = &self.reward {
            if reward.len() < 2 {
                return Err(field_err("reward", "needs at least two states".into()));
            }
            if reward.iter().any(|r| !r.is_finite()) {
                return Err(field_err("reward", "entries must be finite".into()));
            }
        }
        for &a in &self.alphas {
            if (a - 1.0).abs() < 1e-12 {
                return Err(field_err(
                    "alpha",
                    "order 1 is excluded (information diverges there)".into(),
                ));
            }
        }
        if self.alphas.is_empty() {
            return Err(field_err("alpha", "needs at least one order".into()));
        }
        if self.betas.is_empty() {
            return Err(field_err("beta", "needs at least one value".into()));
        }
        match self.mode {
            Mode::Occupancy => {
                if self.mdp.is_none() {
                    return Err(field_err("mdp", "occupancy mode needs an MDP file".into()));
                }
            }
            Mode::Optima | Mode::Sweep => {
                if self.mdp.is_none() && self.reward.is_none() {
                    return Err(field_err(
                        "reward",
                        format!("{} mode needs a reward vector or an MDP file", self.mode.name()),
                    ));
                }
                if self.mode == Mode::Sweep {
                    if self.betas.len() < 3 {
                        return Err(field_err("beta", "sweep needs at least three values".into()));
                    }
                    if self.betas.windows(2).any(|w| w[0] >= w[1]) || self.betas[0] <= 0.0 {
                        return Err(field_err(
                            "beta",
                            "sweep betas must be positive and strictly ascending".into(),
                        ));
                    }
                }
            }
            Mode::Natgrad => {
                if self.mdp.is_none() && self.reward.is_none() {
                    return Err(field_err(
                        "reward",
                        "natgrad mode needs a reward vector (teleport benchmark) or an MDP file"
                            .into(),
                    ));
                }
            }
            Mode::Dpi | Mode::Knn | Mode::Verify => {}
        }
        if self.episodes < 2 {
            return Err(field_err("episodes", "needs at least two episodes".into()));
        }
        if self.trials == 0 {
            return Err(field_err("trials", "needs at least one trial".into()));
        }
        for (name, value) in [
            ("tolerances.optimum", self.tolerances.optimum),
            ("tolerances.geodesic", self.tolerances.geodesic),
            ("tolerances.gradient", self.tolerances.gradient),
        ] {
            if value.is_nan() || value <= 0.0 {
                return Err(field_err(name, format!("must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let config = ExperimentConfig::resolve(Mode::Verify, None, &Overrides::default()).unwrap();
        assert_eq!(config.seed, 42);
        assert_eq!(config.alphas, vec![-1.0, -0.5, 0.0, 0.5]);
        assert_eq!(config.tolerances.optimum, 1e-6);
    }

    #[test]
    fn flags_beat_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        std::fs::write(&path, "seed = 7\nreward = [1.0, 0.0]\n").unwrap();
        let overrides = Overrides {
            seed: Some(99),
            ..Default::default()
        };
        let config = ExperimentConfig::resolve(Mode::Optima, Some(&path), &overrides).unwrap();
        assert_eq!(config.seed, 99);
        assert_eq!(config.reward, Some(vec![1.0, 0.0]));
    }

    #[test]
    fn mode_required_fields_are_validated() {
        let err =
            ExperimentConfig::resolve(Mode::Occupancy, None, &Overrides::default()).unwrap_err();
        assert_eq!(err.exit_status(), 2);
        assert!(err.to_string().contains("mdp"));
    }

    #[test]
    fn sweep_betas_must_ascend() {
        let overrides = Overrides {
            reward: Some(vec![1.0, 0.0]),
            betas: Some(vec![1.0, 0.5, 2.0]),
            ..Default::default()
        };
        let err = ExperimentConfig::resolve(Mode::Sweep, None, &overrides).unwrap_err();
        assert!(err.to_string().contains("ascending"));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        std::fs::write(&path, "sed = 7\n").unwrap();
        let err = ExperimentConfig::resolve(Mode::Verify, Some(&path), &Overrides::default())
            .unwrap_err();
        assert_eq!(err.exit_status(), 2);
    }
}
