use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("pole: {what} at {at}")]
    Pole { what: String, at: String },

    #[error("argument {arg} outside the principal branch of {function}")]
    Branch { function: &'static str, arg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("non-finite iterate at iteration {iteration}, theta = {theta}")]
    NotFinite { iteration: usize, theta: f64 },

    #[error("logarithm branch jump of {jump:.3} rad between theta = {theta0} and {theta1}")]
    BranchJump { jump: f64, theta0: f64, theta1: f64 },

    #[error("collocation fit residual {0:e} above threshold")]
    Collocation(f64),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: i64, range: String },

    #[error("imaginary part of theta {im} outside the validated strip |Im| <= {limit}")]
    Strip { im: f64, limit: f64 },

    #[error("overflow guard: |{what}| = {magnitude:e} exceeds {bound:e}")]
    Overflow {
        what: &'static str,
        magnitude: f64,
        bound: f64,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),
}
