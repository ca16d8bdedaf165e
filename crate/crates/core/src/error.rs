use thiserror::Error;

/// Failures raised by geometry, estimators and the simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a precondition (bad parameter, mismatched spaces, invalid weights).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine could not produce a trustworthy answer.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// The estimator was asked for more points than it supports.
    #[error("capacity error: {n} points exceeds the cap of {cap}")]
    Capacity { n: usize, cap: usize },
    /// An iterative estimator ran out of rounds.
    #[error("no convergence after {rounds} rounds (final diameter {diameter:e})")]
    Convergence { rounds: usize, diameter: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
