use thiserror::Error;

/// Errors raised while building instances, solving the model or parsing inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible equilibrium: {0}")]
    Infeasible(String),

    #[error("unknown parameter path `{0}`")]
    UnknownParameter(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid closure: {0}")]
    InvalidClosure(String),

    #[error("objective does not change sign over [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no convergence after {iterations} iterations (bracket width {width:e})")]
    NonConvergence { iterations: usize, width: f64 },

    #[error("need at least {needed} grid points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn domain(msg: impl Into<String>) -> ModelError {
    ModelError::Domain(msg.into())
}
