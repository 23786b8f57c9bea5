//! Command-line front end.
//!
//! ```text
//! curiosity-geom <mode> [--config PATH] [--seed N] [--alpha ...] [--beta ...]
//!                [--out DIR] [--only CHECK] [--mdp PATH] [--reward ...]
//! ```
//!
//! Exit status: 0 when every assertion of the mode passed, 1 on an
//! assertion failure (the summary names the failing check), 2 on config or
//! parse errors. `CURIOSITY_GEOM_THREADS` caps the worker pool.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use curiosity_geom::experiment::{run, ExperimentConfig, Mode, Overrides};

#[derive(Parser, Debug)]
#[command(
    name = "curiosity-geom",
    about = "Information-geometric exploration toolkit",
    version
)]
struct Cli {
    /// Execution mode: occupancy|optima|sweep|natgrad|dpi|knn|verify.
    mode: String,

    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed (default 42).
    #[arg(long)]
    seed: Option<u64>,

    /// Divergence orders, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,

    /// Trade-off weights, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,

    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Restrict `verify` to checks whose name contains this string.
    #[arg(long)]
    only: Option<String>,

    /// MDP file (JSON).
    #[arg(long)]
    mdp: Option<PathBuf>,

    /// Inline reward vector, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    reward: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("CURIOSITY_GEOM_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // Ignore failure: the pool may already be initialized in-process.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: CURIOSITY_GEOM_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }

    let mode: Mode = match cli.mode.parse() {
        Ok(mode) => mode,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        seed: cli.seed,
        mdp: cli.mdp,
        reward: cli.reward,
        alphas: cli.alpha,
        betas: cli.beta,
        out: cli.out,
        only: cli.only,
    };
    let config = match ExperimentConfig::resolve(mode, cli.config.as_deref(), &overrides) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(u8::try_from(e.exit_status()).unwrap_or(1));
        }
    };
    match run(&config) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_status()).unwrap_or(1))
        }
    }
}
