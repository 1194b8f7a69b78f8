use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The Fisher information failed its Cholesky factorization.
    #[error("information matrix is not positive definite at iteration {iteration}")]
    SingularInformation { iteration: usize },

    #[error("fit did not converge after {iterations} iterations (score max-norm {grad_norm:e})")]
    NotConverged { iterations: usize, grad_norm: f64 },

    /// A Newton step left the natural parameter domain and step halving could not recover.
    #[error("linear predictor left the natural parameter domain at iteration {iteration}")]
    DomainEscape { iteration: usize },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
