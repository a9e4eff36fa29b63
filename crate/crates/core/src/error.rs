use thiserror::Error;

/// Errors produced by the simulation engine and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("robots {first} and {second} coincide (distance {distance:e})")]
    DuplicatePositions {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("robot {index} at ({x}, {y}) lies outside the domain")]
    OutOfDomain { index: usize, x: f64, y: f64 },

    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),

    #[error("sensor model has no range limit but the operation requires one")]
    MissingRange,

    #[error("strategy {0} requires a sensor range limit")]
    InvalidCombination(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input rather than a failed run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Validation { .. } | Error::InvalidCombination(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
