use thiserror::Error;

/// Errors raised by the numerical and discretization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: max deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("invalid harmonic index (ell = {ell}, mu = {mu})")]
    InvalidIndex { ell: i64, mu: i64 },
    #[error("quadrature exactness {available} is below the required {required}")]
    InsufficientExactness { required: usize, available: usize },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("insufficient data for a rate fit: {usable} usable points, need at least 3")]
    InsufficientData { usable: usize },
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("degenerate joint eigenspace: {0}")]
    Degeneracy(String),
    #[error("diffeomorphism is not invertible: {0}")]
    NonInvertible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
