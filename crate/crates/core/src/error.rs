use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("variable x{index} outside the declared range 1..={n_vars}")]
    VariableOutOfRange { index: usize, n_vars: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry ({row}, {col}) has degree {degree}; a linear pencil needs degree <= 1")]
    DegreeTooHigh { row: usize, col: usize, degree: usize },

    #[error("entry ({row}, {col}) contains a starred letter; pencils are over unstarred variables")]
    StarredLetter { row: usize, col: usize },

    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),

    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown variable `{name}` at {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("pencil has no nonzero coefficient")]
    ZeroPencil,

    #[error("pencil has a nonzero constant term; homogenize it first")]
    NonHomogeneous,

    #[error("operator scaling inconclusive after {iterations} iterations (defect {defect:.3e})")]
    Inconclusive { iterations: usize, defect: f64 },

    #[error("substitution estimates disagree: {0}")]
    NoConsensus(String),

    #[error("fullness engines disagree: {0}")]
    Disagreement(String),

    #[error("evaluation point outside the domain: sigma_min {sigma_min:.3e} <= threshold {threshold:.3e}")]
    OutOfDomain { sigma_min: f64, threshold: f64 },

    #[error("{0} numeric atom candidate(s) could not be certified")]
    UncertifiedCandidates(usize),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("free group ball has {count} elements, above the limit of 1000000")]
    BallTooLarge { count: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {message}")]
    PencilFile { path: String, message: String },

    #[error("numerical decomposition failed: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
