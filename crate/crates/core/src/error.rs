use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^H| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("wrong number of phases: expected {expected}, got {got}")]
    PhaseCount { expected: usize, got: usize },

    #[error("extension constraints are inconsistent (residual {residual:e})")]
    InfeasibleConstruction { residual: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
