use thiserror::Error;

/// Errors raised by the core value algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("kind mismatch for `{var}`: expected {expected}, got {got}")]
    KindMismatch {
        var: String,
        expected: String,
        got: String,
    },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("overlapping domains at `{0}`")]
    Overlap(String),
    #[error("comparison `{op}` is not defined for {kind} operands")]
    BadComparison { op: String, kind: String },
    #[error("`{value}` is not an enumerant of `{var}`")]
    UnknownEnumerant { var: String, value: String },
    #[error("malformed state token: {0}")]
    MalformedToken(String),
    #[error("{0}")]
    Invalid(String),
}
