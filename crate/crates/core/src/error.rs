use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (dimensions, parameters, files).
    #[error("input error: {0}")]
    Input(String),

    /// The structure tensor violates a step-two invariant.
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    /// A truncated series did not reach its tolerance within the term cap.
    #[error("series did not converge after {terms} terms (remaining bound {residual_bound:e})")]
    Convergence { terms: usize, residual_bound: f64 },

    /// The covector has a nontrivial `W_inf` so the requested block structure does not exist.
    #[error("degenerate covector: W_inf has dimension {w_inf_dim}")]
    DegenerateCovector { w_inf_dim: usize },

    /// The log-log slope is not close to an integer.
    #[error("ambiguous order: fitted slope {slope} is {distance} away from the nearest integer; extend the grid")]
    AmbiguousOrder { slope: f64, distance: f64 },

    /// The covector was rejected by the domain proxy.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Every sampled covector had infinite order.
    #[error("all {samples} samples have infinite order")]
    PathologicalSampling { samples: usize },

    /// A volume estimate is statistically indistinguishable from zero.
    #[error("degenerate region: volume at lambda={lambda} is consistent with zero")]
    DegenerateRegion { lambda: f64 },

    /// Trajectory left the finite floats.
    #[error("integration diverged at t={t}")]
    Divergence { t: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_check(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Input(format!("{what}: expected length {expected}, got {got}")))
    }
}
