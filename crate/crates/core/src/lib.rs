//! Semantic domain types for the system-graph toolchain.
//!
//! Everything here is an immutable value type; all operations are pure. The
//! crate defines evaluations over finite variable domains, guards, actions,
//! the system-graph model itself, and the two transition-system forms the
//! rest of the workspace analyzes.

pub mod action;
pub mod error;
pub mod eval;
pub mod graph;
pub mod guard;
pub mod ts;
pub mod value;

pub use action::{Action, MsgExpr};
pub use error::CoreError;
pub use eval::{eval_merge, eval_override, Evaluation, SignatureSet, VarSignature};
pub use graph::{
    ChannelDecl, EmbedDecl, LabelRule, Proposition, StateDeclarator, SystemGraph, TransitionDecl,
};
pub use guard::{Atom, CmpOp, Cnf, Guard, Literal, Operand};
pub use ts::{
    ActionInstance, ChannelSystem, CondState, CondTransition, ConditionalTs, StateKey,
    TransitionSystem, TsState, TsTransition,
};
pub use value::{TypedValue, ValueKind};
