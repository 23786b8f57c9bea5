//! Crate-wide error type.

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A weight vector failed a simplex or positivity invariant.
    /// `context` names the object, `reason` carries the offending index.
    #[error("invalid weights for {context}: {reason}")]
    InvalidWeights { context: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input is valid but the requested quantity is undefined on it
    /// (e.g. the alignment cosine at p = q).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "no convergence after {iterations} iterations \
         (residual {residual:.3e}, tolerance {tolerance:.3e})"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("no multiplier root in the bracket ({lo:.6e}, {hi:.6e})")]
    NoRoot { lo: f64, hi: f64 },

    #[error("singular natural-gradient metric: {0}")]
    SingularMetric(String),

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit status for the CLI: config and parse problems are usage errors.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Parse { .. } => 2,
            _ => 1,
        }
    }
}
