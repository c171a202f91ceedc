use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} is unreachable")]
    Unreachable(usize),

    #[error("coefficient evaluation failed at ({x}, {y}): {reason}")]
    Coefficient { x: f64, y: f64, reason: String },

    #[error("factorization breakdown at pivot {pivot} (|pivot| = {magnitude:e})")]
    FactorizationBreakdown { pivot: usize, magnitude: f64 },

    #[error("solver did not converge: relative residual {residual:e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },

    #[error("operator is not elliptic: {0}")]
    NotElliptic(String),

    #[error("contour quadrature disagrees with the exponential oracle: max deviation {deviation:e}")]
    ContourMismatch { deviation: f64 },

    #[error("kernel bound fit failed: {0}")]
    BoundFit(String),

    #[error("parse error: {0}")]
    Parse(String),
}
