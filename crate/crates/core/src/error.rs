use thiserror::Error;

/// Errors raised by field evaluation, coordinate maps and verification.
///
/// Locations and magnitudes are carried as `f64` whatever the scalar type
/// the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite argument: {0}")]
    NonFinite(f64),

    #[error("{what} at {at} lies outside the domain ({lo}, {hi})")]
    Domain { what: &'static str, at: f64, lo: f64, hi: f64 },

    #[error("singular point at {at}{}", nearest_zero.map(|z| format!(" (nearest amplitude zero {z})")).unwrap_or_default())]
    Singular { at: f64, nearest_zero: Option<f64> },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge: tail estimate {tail:e} exceeds {limit:e}")]
    Accuracy { tail: f64, limit: f64 },

    #[error("coverage too low: {skipped} of {total} grid points skipped")]
    Coverage { skipped: usize, total: usize },

    #[error("map is not invertible on ({lo}, {hi})")]
    NonInvertible { lo: f64, hi: f64 },

    #[error("root finder failed: {0}")]
    RootFinding(&'static str),

    #[error("integration step underflow at lambda = {lambda}")]
    StepUnderflow { lambda: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
