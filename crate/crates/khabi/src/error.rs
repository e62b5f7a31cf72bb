use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps variants onto its exit-code contract: usage problems exit 1,
/// oracle or invariant breaches exit 2, numerical non-convergence exits 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root isolation failed: {0}")]
    RootIsolation(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("oracle check failed: {0}")]
    OracleFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
