use sysgraph_core::CoreError;
use thiserror::Error;

/// Errors raised while elaborating graphs into transition systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("initial constraint of `{system}` is violated by {eval}")]
    InitialGuardViolated { system: String, eval: String },
    #[error("`{0}` declares no initial state")]
    NoInitialState(String),
    #[error("initial state `{state}` of `{system}` is not declared")]
    UnknownState { system: String, state: String },
    #[error("exploration limit hit: {visited} states at depth {depth} (cap: {limit})")]
    LimitExceeded {
        visited: usize,
        depth: usize,
        limit: usize,
    },
    #[error("proposition `{0}` is declared by more than one component")]
    DuplicateProposition(String),
    #[error("variable `{var}` is declared differently across components")]
    SharedMismatch { var: String },
    #[error("channel `{chan}`: {reason}")]
    ChannelMismatch { chan: String, reason: String },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
