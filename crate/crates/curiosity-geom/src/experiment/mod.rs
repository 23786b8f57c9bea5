//! Config-driven experiment front end: modes, the verification suite, and
//! deterministic artifact output.

pub mod checks;
pub mod config;
pub mod run;

pub use checks::{verify_suite, CheckResult};
pub use config::{ExperimentConfig, Mode, Overrides, Tolerances};
pub use run::{run, RunOutcome};
