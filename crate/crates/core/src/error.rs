use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("topology error: {0}")]
    Topology(String),
    #[error("degenerate triangle with signed area {area:e}")]
    Geometry { area: f64 },
    #[error("unsupported quadrature request: {0}")]
    UnsupportedDegree(String),
    #[error("incompatible boundary data at vertex {vertex} ({x}, {y}): discrepancy {discrepancy:e}")]
    DataCompatibility {
        vertex: usize,
        x: f64,
        y: f64,
        discrepancy: f64,
    },
    #[error("matrix is not positive definite: pivot {pivot} has value {value:e}")]
    NotSpd { pivot: usize, value: f64 },
    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("value out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
