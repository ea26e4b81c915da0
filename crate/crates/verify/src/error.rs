//! Errors of the property checker.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unknown proposition {0}")]
    UnknownProposition(String),
    #[error("temporal operator outside a path quantifier; the formula is neither pure LTL nor well-formed CTL")]
    MixedLogic,
    #[error("expected an LTL formula, found path quantifiers")]
    NotLtl,
    #[error("expected a CTL formula")]
    NotCtl,
    #[error("counterexample is not a path of the system: {0}")]
    BrokenLasso(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
