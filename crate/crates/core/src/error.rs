use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {what} = {value} ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Parameters outside the box where an evaluation has been validated.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("assembly failure: {0}")]
    Assembly(String),

    #[error("time step failed at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("solution exceeded {threshold} at t = {t} (max {max})")]
    Overflow { t: f64, max: f64, threshold: f64 },

    /// The step size fell below its floor before the blow-up threshold was
    /// crossed, so the run cannot decide between blow-up and boundedness.
    #[error("inconclusive: time step collapsed to {dt} at t = {t} without crossing the threshold")]
    Inconclusive { t: f64, dt: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("{context}: key `{key}` = {value} is out of range ({expected})")]
    Range {
        context: String,
        key: String,
        value: String,
        expected: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
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
