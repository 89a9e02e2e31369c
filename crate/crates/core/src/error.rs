use thiserror::Error;

/// Errors raised across the geometry, volume, capacity and billiard layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("origin is not in the interior of the body")]
    OriginNotInterior,

    #[error("polytope is unbounded: {0}")]
    Unbounded(String),

    #[error("degenerate body: {0}")]
    Degenerate(String),

    #[error("dimension {0} exceeds the exact enumeration cap of {cap}", cap = crate::bodies::MAX_EXACT_DIM)]
    DimensionTooLarge(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("body is not centrally symmetric")]
    NotSymmetric,

    #[error("body does not satisfy K = iK")]
    NotQuarterSymmetric,

    #[error("non-smooth body: {0}")]
    NonSmooth(String),

    #[error("gliding onset: <grad g_T(p), n_q> = {inner:.3e} is not below -tangency_tol")]
    GlidingOnset { inner: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("optimizer did not converge; best length so far {best_so_far}")]
    NoConvergence { best_so_far: f64 },

    #[error("{path}: {message}")]
    Spec { path: String, message: String },

    #[error("row {row}: {source}")]
    Row { row: usize, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
