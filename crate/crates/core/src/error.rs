use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axis {axis} out of range for dimension {dim} (axes are 1..={dim})")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("field set mismatch: expected {expected} fields, got {got}")]
    FieldMismatch { expected: usize, got: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("operator is not antisymmetric: {0}")]
    NotAntisymmetric(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared identifier `{0}`")]
    Undeclared(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("expected {expected}, found {found}")]
    Kind { expected: &'static str, found: &'static str },

    #[error("problem file: {0}")]
    Problem(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),
}
