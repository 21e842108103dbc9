use std::io;

use thiserror::Error;

/// Errors produced by the solvers, the mesh generator and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("unbounded search: {what} not bracketed below r_max = {cap}")]
    UnboundedSearch { what: String, cap: f64 },

    #[error("convergence failure in {what}; last bracket [{lo}, {hi}]")]
    Convergence { what: String, lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn convergence(what: impl Into<String>, lo: f64, hi: f64) -> Self {
        Error::Convergence {
            what: what.into(),
            lo,
            hi,
        }
    }
}
