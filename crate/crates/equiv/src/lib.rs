//! Behavioral comparison of explicit transition systems.
//!
//! Two systems are compared through their labeled behavior: states are
//! distinguishable only by the proposition sets they carry and by the
//! branching structure of their successors. Action names decorate the
//! result (they make witnesses readable) but never drive it.
//!
//! The crate exposes three layers:
//! - [`bisim_classes`]: partition refinement over one system, yielding the
//!   coarsest label-respecting equivalence.
//! - [`greatest_simulation`]: the largest simulation relation over a state
//!   space given as label and successor tables.
//! - [`refine_check`]: the two-system entry point producing a
//!   [`RefineReport`] with checkable [`Witness`] values for every verdict
//!   that fails.

mod partition;
mod refine;
mod simulation;

pub use partition::bisim_classes;
pub use refine::{
    refine_check, validate_witness, Claim, RefineReport, Side, SimulationCheck, Witness,
    WitnessDetail,
};
pub use simulation::greatest_simulation;

#[cfg(test)]
pub(crate) mod support {
    use std::collections::BTreeMap;
    use sysgraph_core::{
        ActionInstance, Evaluation, StateKey, TransitionSystem, TsState, TsTransition, TypedValue,
    };

    /// Build a small system by hand: one label set per state, edges as
    /// (src, action, dst), state 0 initial. State ids double as identities.
    pub fn tiny(labels: &[&[&str]], edges: &[(usize, &str, usize)]) -> TransitionSystem {
        let states = labels
            .iter()
            .enumerate()
            .map(|(i, ls)| TsState {
                key: StateKey {
                    eval: Evaluation::from_pairs(vec![(
                        "id".to_string(),
                        TypedValue::Int(i as i64),
                    )]),
                    channels: BTreeMap::new(),
                    decls: vec![format!("s{i}")],
                },
                labels: ls.iter().map(|s| s.to_string()).collect(),
            })
            .collect::<Vec<_>>();
        let atomic_propositions = states.iter().flat_map(|s| s.labels.clone()).collect();
        TransitionSystem {
            states,
            initials: [0].into_iter().collect(),
            transitions: edges
                .iter()
                .map(|&(src, act, dst)| TsTransition {
                    src,
                    action: ActionInstance::Named(act.to_string()),
                    dst,
                })
                .collect(),
            atomic_propositions,
            truncated: false,
        }
    }
}
