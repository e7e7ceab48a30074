use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |A - A†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not anti-Hermitian (max |T + T†| = {deviation:.3e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("operator is not positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace:.12}, expected 1 within {tol:.1e}")]
    NotUnitTrace { trace: f64, tol: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("zero vector where a nonzero representative is required")]
    ZeroVector,

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("trace drift {drift:.3e} exceeded tolerance at t = {t}")]
    TraceDrift { t: f64, drift: f64 },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
