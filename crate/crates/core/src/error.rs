use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("dimension {dim} exceeds the capacity of {cap}")]
    Capacity { dim: usize, cap: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("cut {cut} is outside 1..={max}")]
    InvalidCut { cut: usize, max: usize },

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("Bloch vector of length {0} lies outside the unit ball")]
    OutOfBall(f64),

    #[error("measurement operators are not complete (deviation {0:e})")]
    InvalidMeasurement(f64),

    #[error("probability estimate is undefined on an empty extraction")]
    EmptyExtraction,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid bet: {0}")]
    InvalidBet(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
