use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid viscosity coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "newton iteration did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iteration diverged: {0}")]
    Diverged(String),

    #[error(
        "continuation could not reach {parameter} = {target} (last converged value {reached})"
    )]
    Unreachable {
        parameter: &'static str,
        target: f64,
        reached: f64,
    },

    #[error("no fold in bracket [{lo}, {hi}]: both branches persist")]
    NoFold { lo: f64, hi: f64 },

    #[error("bracket ends give identical outcomes ({0})")]
    IdenticalOutcomes(String),

    #[error("eigen-solver failure: {0}")]
    EigenSolver(String),

    #[error("branch database is empty")]
    EmptyDatabase,

    #[error("{0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
