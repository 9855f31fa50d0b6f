use thiserror::Error;

/// Errors raised by projections, the cycle engine and the counterexample model.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hull projection did not converge after {iterations} iterations (best certificate violation {violation:e})")]
    HullNotConverged { iterations: usize, violation: f64 },

    #[error("no epsilon-cycle within {loops} loops (last displacement {displacement:e})")]
    MaxLoopsExceeded { loops: u64, displacement: f64 },

    #[error("least-squares descent did not reach the tolerance after {iterations} steps (gradient norm {gradient_norm:e})")]
    LeastSquaresNotConverged { iterations: u64, gradient_norm: f64 },

    #[error("invalid angle sequence: {0}")]
    InvalidAngles(String),

    #[error("contact geometry violated: {0}")]
    ContactGeometry(String),

    #[error("point is not on the projected zig-zag path (distance {distance:e})")]
    NotOnPath { distance: f64 },

    #[error("epsilon {epsilon} is below the reach {reach} of truncation K={k}; increase K")]
    BelowTruncationReach { epsilon: f64, reach: f64, k: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
