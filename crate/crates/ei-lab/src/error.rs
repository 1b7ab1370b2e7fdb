use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its depth budget. Carries the best
    /// estimate together with the accumulated error bound.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    Convergence { estimate: f64, error_bound: f64 },

    /// Not enough observations to evaluate an estimator (e.g. fewer than
    /// two threshold exceedances).
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A sample on which the estimator is mathematically undefined
    /// (e.g. all interexceedance gaps zero for the Süveges estimator).
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// Malformed study configuration or input file.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
