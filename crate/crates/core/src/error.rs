use thiserror::Error;

/// Errors raised by the solver modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("u = {u} lies outside the sampled flux domain [{lo}, {hi}]")]
    Domain { u: f64, lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("inadmissible fan: {0}")]
    Admissibility(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("no convergence after {iterations} iterations (last update {final_update:e})")]
    Convergence { iterations: usize, final_update: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
