use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grid of {grid} points along axis {axis} aliases degree {degree} (need at least {needed})")]
    Aliasing {
        axis: usize,
        grid: usize,
        degree: usize,
        needed: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("divergent series: {0}")]
    Divergent(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("function is not real-valued")]
    NotReal,

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("coefficient box too large ({0} entries)")]
    BoxTooLarge(usize),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
