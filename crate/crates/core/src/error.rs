use thiserror::Error;

use crate::model::SolverMethod;

/// Errors produced by the sample-size library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside its admissible range.
    #[error("{field} = {value} is out of range: expected {bound}")]
    Domain {
        field: &'static str,
        value: f64,
        bound: &'static str,
    },

    /// An input was NaN or infinite.
    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    /// A solver produced a value that cannot be a sample size. On the valid
    /// domain this only happens if a formula was mistranscribed.
    #[error("{method} produced an inconsistent intermediate `{what}` = {value}")]
    Inconsistent {
        method: SolverMethod,
        what: &'static str,
        value: f64,
    },

    /// The iterative search exhausted its budget without meeting the target.
    #[error(
        "no N in [{start_n}, {max_n}] reaches the target SE; SE at N = {max_n} is {se_at_max}"
    )]
    CeilingExceeded {
        start_n: u64,
        max_n: u64,
        se_at_max: f64,
    },

    /// A configuration record violated its own invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A grid specification could not be built or validated.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("baseline method {0} is not present in the benchmark report")]
    MissingBaseline(SolverMethod),

    #[error("no monotonic clock is available")]
    ClockUnavailable,

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
