use meanbound_core::catalog::CatalogError;
use meanbound_core::{DomainError, EvalError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Hypothesis(#[from] CatalogError),
    #[error("invalid input: {0}")]
    Domain(#[from] DomainError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("oracle: {0}")]
    Oracle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit status: always 2. Status 1 is reserved for observed violations,
    /// which are reports rather than errors.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
