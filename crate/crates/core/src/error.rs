//! Error type shared by every audit stage.

use thiserror::Error;

/// Failure modes of the evaluation and audit pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("invalid precision setting: {0}")]
    InvalidPrecision(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("gamma has a pole at a non-positive integer ({0})")]
    PoleAtNonPositiveInteger(f64),

    #[error("quadrature did not converge: error estimate {error} after {panels} panels")]
    NonConvergence { error: String, panels: usize },

    #[error("theta-series tail bound {bound:e} exceeds tolerance {tolerance:e}")]
    TailBoundViolated { bound: f64, tolerance: f64 },

    #[error("zero table line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("zero table line {line}: ordinates are not strictly increasing")]
    Order { line: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("closed forms disagree: direct {direct}, split {split}")]
    FormMismatch { direct: String, split: String },

    #[error("symbolic step failed: {0}")]
    Symbolic(String),

    #[error("term merge mismatch: {0}")]
    MergeMismatch(String),

    #[error("imaginary part is zero; the sign argument needs t2 != 0")]
    DegenerateT2,

    #[error("sign premise failed: Q(b1) = {q1}, Q(b2) = {q2}")]
    PremiseFailed { q1: String, q2: String },

    #[error("case analysis exhausted: {0}")]
    CaseExhausted(String),

    #[error("invalid zero candidate: {0}")]
    InvalidCandidate(String),
}

impl AuditError {
    /// True for errors caused by bad user input rather than a numerical failure.
    pub fn is_usage_error(&self) -> bool {
        matches!(
            self,
            AuditError::InvalidPrecision(_)
                | AuditError::InvalidInput(_)
                | AuditError::InvalidCandidate(_)
                | AuditError::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, AuditError>;
