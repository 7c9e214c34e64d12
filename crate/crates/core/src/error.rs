use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("duplicate mode index {0}")]
    DuplicateIndex(usize),

    #[error("grid does not cover the requested support; only {covered:.6} of the weight lies on the grid")]
    TruncatedGrid { covered: f64 },

    #[error("transform window too short: {0}")]
    TransformWindow(String),

    #[error("Hilbert space dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("infeasible coupling targets: {0}")]
    Infeasible(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("orbital `{label}` is not normalized (norm = {norm:.9})")]
    Normalization { label: String, norm: f64 },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Parse failure at a 1-based line and column.
    pub(crate) fn parse(path: impl Into<String>, line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
