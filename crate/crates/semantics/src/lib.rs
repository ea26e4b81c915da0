//! Elaboration: from system graphs to explicit transition systems.
//!
//! The pipeline has three stages. State inference computes the evaluation a
//! run starts in and how target pins rewrite it per step. Lowering turns one
//! graph into a conditional transition system whose receive edges range over
//! the channel's whole domain. Exploration then couples lowered components
//! through channels (or shared variables, for channel-free compositions)
//! and enumerates the reachable global states breadth-first.

pub mod compose;
pub mod error;
pub mod explore;
pub mod initial;
pub mod interp;

pub use compose::{compose_interleave, compose_shared};
pub use error::ElabError;
pub use explore::{channel_system, explicit_ts, explore, ExplorationConfig, LimitPolicy};
pub use initial::{infer_successor, initial_state};
pub use interp::{decl_support, interpret_graph};
