use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("negative eigenvalue {value:e} below tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("spectrum weight {weight} differs from 1")]
    WeightViolation { weight: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("size {requested} exceeds limit {limit}: {hint}")]
    TooLarge {
        requested: usize,
        limit: usize,
        hint: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
