//! Seeded random transition systems for differential testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use sysgraph_core::{
    ActionInstance, Evaluation, StateKey, TransitionSystem, TsState, TsTransition, TypedValue,
};

/// Shape of a generated system.
#[derive(Debug, Clone, Copy)]
pub struct TsShape {
    pub states: usize,
    /// Edges per state, upper bound (lower bound is 0: terminals happen).
    pub max_out: usize,
    pub actions: usize,
    pub props: usize,
}

impl Default for TsShape {
    fn default() -> Self {
        TsShape {
            states: 8,
            max_out: 3,
            actions: 3,
            props: 2,
        }
    }
}

/// A random transition system; identical (seed, shape) gives an identical
/// system. Every state is reachable from state 0 by construction: each state
/// after the first gets one incoming edge from an earlier state.
pub fn random_ts(seed: u64, shape: TsShape) -> TransitionSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shape.states.max(1);
    let props: Vec<String> = (0..shape.props).map(|i| format!("P{i}")).collect();
    let actions: Vec<String> = (0..shape.actions.max(1)).map(|i| format!("a{i}")).collect();

    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let labels: BTreeSet<String> = props
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        states.push(TsState {
            key: StateKey {
                eval: Evaluation::from_pairs([("id", TypedValue::Int(i as i64))]),
                channels: BTreeMap::new(),
                decls: vec![format!("s{i}")],
            },
            labels,
        });
    }

    let mut transitions = Vec::new();
    for dst in 1..n {
        let src = rng.gen_range(0..dst);
        let action = actions[rng.gen_range(0..actions.len())].clone();
        transitions.push(TsTransition {
            src,
            action: ActionInstance::Named(action),
            dst,
        });
    }
    for src in 0..n {
        let extra = rng.gen_range(0..=shape.max_out.saturating_sub(1));
        for _ in 0..extra {
            let dst = rng.gen_range(0..n);
            let action = actions[rng.gen_range(0..actions.len())].clone();
            transitions.push(TsTransition {
                src,
                action: ActionInstance::Named(action),
                dst,
            });
        }
    }
    transitions.sort();
    transitions.dedup();

    let mut ts = TransitionSystem {
        states,
        initials: BTreeSet::from([0]),
        transitions,
        atomic_propositions: props.into_iter().collect(),
        truncated: false,
    };
    ts.sort_transitions();
    ts
}

/// A copy of `ts` with one random label flipped on one random state, which
/// usually (not always) breaks bisimilarity with the original.
pub fn flip_one_label(ts: &TransitionSystem, seed: u64) -> TransitionSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ts.clone();
    if out.states.is_empty() || out.atomic_propositions.is_empty() {
        return out;
    }
    let si = rng.gen_range(0..out.states.len());
    let props: Vec<&String> = out.atomic_propositions.iter().collect();
    let p = props[rng.gen_range(0..props.len())].clone();
    let labels = &mut out.states[si].labels;
    if !labels.remove(&p) {
        labels.insert(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_system() {
        let a = random_ts(7, TsShape::default());
        let b = random_ts(7, TsShape::default());
        assert_eq!(a.dump(), b.dump());
    }

    #[test]
    fn different_seeds_differ() {
        let a = random_ts(1, TsShape::default());
        let b = random_ts(2, TsShape::default());
        assert_ne!(a.dump(), b.dump());
    }

    #[test]
    fn every_state_is_reachable() {
        for seed in 0..20 {
            let ts = random_ts(seed, TsShape::default());
            let succs = ts.succ_lists();
            let mut seen = vec![false; ts.state_count()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(s) = stack.pop() {
                for &d in &succs[s] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
            assert!(seen.into_iter().all(|x| x), "seed {seed}");
        }
    }
}
