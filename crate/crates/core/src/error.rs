use thiserror::Error;

/// Failure modes shared by the numerical modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("non-finite integrand value at x = {at}")]
    Evaluation { at: f64 },
    #[error("non-finite state at step {step} (independent variable {at})")]
    BlowUp { step: usize, at: f64 },
    #[error("no one-cut solution: {0}")]
    NoOneCut(String),
    #[error("recurrence breakdown at k = {k} (beta = {beta})")]
    Breakdown { k: usize, beta: f64 },
    #[error("inconsistent result: {0}")]
    Inconsistency(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
