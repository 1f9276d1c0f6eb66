use thiserror::Error;

/// Errors raised by the numerical pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpucError {
    #[error("seq_algebra: {0}")]
    Algebra(String),

    #[error("seq_algebra: evaluation at z = 0 of a series with negative-index support")]
    EvaluationDomain,

    #[error("opuc_engine: weight is not strictly positive on the grid (w(theta_{index}) = {value:e} at theta = {theta})")]
    NonPositiveWeight { index: usize, theta: f64, value: f64 },

    #[error("opuc_engine: weight is not real on the grid (|Im w| = {imag:e} at theta_{index})")]
    NonRealWeight { index: usize, imag: f64 },

    #[error("opuc_engine: invalid weight spec: {0}")]
    InvalidSpec(String),

    #[error("opuc_engine: quadrature size {m} rejected: {reason}")]
    Quadrature { m: usize, reason: String },

    #[error("opuc_engine: moment table numerically degenerate at step {step} (|alpha| = {modulus})")]
    Degenerate { step: usize, modulus: f64 },

    #[error("opuc_engine: requested {requested} coefficients but only {available} are available")]
    Truncation { requested: usize, available: usize },

    #[error("baxter_lab: {0}")]
    Lab(String),

    #[error("baxter_lab: root set unreliable at this truncation (companion count {companion}, winding count {winding:.3})")]
    WindingMismatch { companion: usize, winding: f64 },

    #[error("baxter_lab: boundary-ambiguous zero at {re} + {im}i (|z| = {modulus})")]
    BoundaryZero { re: f64, im: f64, modulus: f64 },

    #[error("baxter_lab: precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, OpucError>;
