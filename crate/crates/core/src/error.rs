use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unknown algebra preset `{0}`")]
    UnknownAlgebra(String),

    #[error("step size {ds} violates the CFL bound {bound} (need ds * max|C A v| < 1)")]
    CflViolation { ds: f64, bound: f64 },

    #[error("time step {dt} exceeds the advective limit {limit} (0.5 * dx / max|u|)")]
    AdvectiveCfl { dt: f64, limit: f64 },

    #[error("non-finite state: {0}")]
    NonFinite(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
