use thiserror::Error;

/// Errors raised by the matrix kernels and the harness built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (defect {defect:.3e} > {allowed:.3e})")]
    Symmetry { defect: f64, allowed: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e} < -{allowed:.3e})")]
    NotPsd { min_eig: f64, allowed: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed matrix data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
