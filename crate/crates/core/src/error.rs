use thiserror::Error;

use crate::discrimination::DiscriminationResult;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("Hilbert space dimension {dim} exceeds the limit of {limit}")]
    DimensionOverflow { dim: u128, limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("optimizer did not converge after {iterations} iterations (residual {:e})", best.certificate_residual)]
    NonConvergence {
        iterations: usize,
        best: Box<DiscriminationResult>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
