use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} exceeds table size {max}")]
    IndexOverflow { index: usize, max: usize },

    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("pole in {func} at {at}")]
    Pole { func: &'static str, at: f64 },

    #[error("{func} did not converge: {detail}")]
    NonConvergence { func: &'static str, detail: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("branch precondition not met: {0}")]
    Branch(String),

    #[error("degenerate stationary point at u = {u}: no even derivative exceeds tolerance")]
    Degenerate { u: f64 },

    #[error("sign error: {0}")]
    Sign(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
