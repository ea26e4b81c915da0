//! Transition actions: internal named steps and channel communication.

use crate::value::TypedValue;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The message expression of a send: a literal or the current value of a
/// state variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MsgExpr {
    Lit(TypedValue),
    Var(String),
}

impl fmt::Display for MsgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsgExpr::Lit(v) => write!(f, "{v}"),
            MsgExpr::Var(x) => write!(f, "{x}"),
        }
    }
}

/// What a transition does besides moving between declarators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Action {
    /// A plain named action with no communication.
    Named(String),
    /// Enqueue the message value at the rear of the channel.
    Send { chan: String, msg: MsgExpr },
    /// Dequeue the front of the channel into a state variable.
    Receive { chan: String, var: String },
}

impl Action {
    pub fn named<S: Into<String>>(name: S) -> Self {
        Action::Named(name.into())
    }

    pub fn send<S: Into<String>>(chan: S, msg: MsgExpr) -> Self {
        Action::Send {
            chan: chan.into(),
            msg,
        }
    }

    pub fn receive<S: Into<String>, T: Into<String>>(chan: S, var: T) -> Self {
        Action::Receive {
            chan: chan.into(),
            var: var.into(),
        }
    }

    pub fn is_communication(&self) -> bool {
        !matches!(self, Action::Named(_))
    }

    /// The channel this action uses, if any.
    pub fn channel(&self) -> Option<&str> {
        match self {
            Action::Named(_) => None,
            Action::Send { chan, .. } | Action::Receive { chan, .. } => Some(chan),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Named(name) => write!(f, "{name}"),
            Action::Send { chan, msg } => write!(f, "{chan}!{msg}"),
            Action::Receive { chan, var } => write!(f, "{chan}?{var}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(Action::named("accelerate").to_string(), "accelerate");
        assert_eq!(
            Action::send("c", MsgExpr::Lit(TypedValue::Int(3))).to_string(),
            "c!3"
        );
        assert_eq!(
            Action::send("c", MsgExpr::Var("tx".into())).to_string(),
            "c!tx"
        );
        assert_eq!(Action::receive("c", "tx").to_string(), "c?tx");
    }

    #[test]
    fn channel_extraction() {
        assert_eq!(Action::named("go").channel(), None);
        assert_eq!(
            Action::send("c", MsgExpr::Lit(TypedValue::Int(0))).channel(),
            Some("c")
        );
        assert!(Action::receive("c", "x").is_communication());
        assert!(!Action::named("go").is_communication());
    }
}
