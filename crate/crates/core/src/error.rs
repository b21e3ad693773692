use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An infinite series did not settle within its term budget.
    #[error("series did not converge after {terms} terms (last partial value {partial})")]
    SeriesNonConvergence { terms: usize, partial: f64 },

    /// A series representation does not apply to these parameters.
    #[error("series form unavailable: {0}")]
    SeriesUnavailable(String),

    /// Adaptive quadrature exhausted its evaluation budget.
    #[error("quadrature did not converge: value {value}, error estimate {error}")]
    QuadratureNonConvergence { value: f64, error: f64 },

    /// A matrix that must be positive definite is singular or indefinite.
    #[error("matrix is singular or not positive definite")]
    Singular,

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Filesystem or stream failure.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
