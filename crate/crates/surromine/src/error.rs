//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by every fallible operation in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration value or combination of values is unusable.
    #[error("invalid config: {0}")]
    Config(String),

    /// A training view selected no archive records.
    #[error("empty training set: no archived evaluations in generations {lo}..={hi}")]
    EmptyTrainingSet { lo: u32, hi: u32 },

    /// Training data admits no meaningful kernel width (zero variance).
    #[error("degenerate training data: {0}")]
    DegenerateData(String),

    /// Text input failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A population member's fitness was read before being assigned.
    #[error("fitness not assigned for population member {index}")]
    UnsetFitness { index: usize },

    /// The predictor failed while probing one variable.
    #[error("probe failed at variable {index}: {source}")]
    Probe {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// An I/O operation failed; `path` names the file involved.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Shorthand for [`Error::InvalidArgument`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Shorthand for [`Error::Config`].
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Shorthand for [`Error::Io`].
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
