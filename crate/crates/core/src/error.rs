//! Error types shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by model validation, measure evaluation and the
/// numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violates a documented parameter or argument constraint.
    /// The message names the constraint that failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bracketing solver was handed an interval without a sign change.
    #[error("bracket error: f has the same sign at both ends of [{lo}, {hi}] (f(lo)={f_lo:e}, f(hi)={f_hi:e})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An iterative routine exhausted its iteration or subdivision budget.
    #[error("convergence error: {context} did not converge within {budget} steps")]
    Convergence { context: &'static str, budget: usize },

    /// The objective is constant over the bracket, so no extremum can be
    /// located.
    #[error("flat error: the curve is constant on [{lo}, {hi}]")]
    Flat { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
