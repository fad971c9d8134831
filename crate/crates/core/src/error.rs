use std::path::PathBuf;

use thiserror::Error;

/// Failure modes shared by every numeric entry point of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural parameter (grid length, index, depth, count) is invalid.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The argument is valid mathematically but beyond what this
    /// implementation evaluates exactly.
    #[error("range error: {0}")]
    Range(String),

    /// The integrand evaluation budget ran out before the tolerance was met.
    #[error("precision unreachable on [{a}, {b}]: {evaluations} integrand evaluations exceed budget {budget}")]
    PrecisionUnreachable {
        a: f64,
        b: f64,
        evaluations: u64,
        budget: u64,
    },

    /// A root bracket could not be established.
    #[error("bracket expansion failed: {0}")]
    Bracket(String),

    /// A checkpoint table violated its invariants.
    #[error("checkpoint table invalid at row {row}: {reason}")]
    Checkpoint { row: usize, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parameter(_) | Error::Range(_) => 2,
            Error::PrecisionUnreachable { .. } | Error::Bracket(_) => 3,
            Error::Checkpoint { .. } | Error::Io { .. } | Error::Serialize(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
