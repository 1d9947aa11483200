use thiserror::Error;

/// Failures raised by the library. Validation-type errors map to CLI exit
/// code 2, numeric failures to exit code 3.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate frequency gamma = {gamma}; use the commutative branch")]
    DegenerateGamma { gamma: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid quantum numbers: |mz| = {mz} exceeds ell = {ell}")]
    QuantumNumberError { ell: u64, mz: i64 },

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e} after {panels} panels")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        panels: usize,
    },

    #[error("series did not converge: partial sum {partial:e} after {terms} terms (last term {last_term:e})")]
    ConvergenceError {
        partial: f64,
        terms: usize,
        last_term: f64,
    },
}

impl Error {
    /// True for failures of the numerical engines, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::QuadratureFailure { .. } | Error::ConvergenceError { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
