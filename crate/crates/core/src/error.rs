use thiserror::Error;

/// Errors raised by geometric and curvature-function operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Principal curvatures outside the admissible cone of a curvature function.
    #[error("domain violation for {function}: {condition}")]
    Domain { function: String, condition: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("degree mismatch: {left} has degree {left_degree}, {right} has degree {right_degree}")]
    DegreeMismatch {
        left: String,
        left_degree: f64,
        right: String,
        right_degree: f64,
    },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("curvature function parse error: {0}")]
    Parse(String),

    #[error("surface is not convex: first offending sample {index} (curvature {curvature})")]
    NotConvex { index: usize, curvature: f64 },

    #[error("curve is not simple: turning number {turning:.6}")]
    NotSimple { turning: f64 },

    #[error("revolution profile rejected: {0}")]
    Profile(String),

    #[error("no sphere soliton in range: {0}")]
    NoRoot(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("flow aborted: {0}")]
    FlowAborted(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
