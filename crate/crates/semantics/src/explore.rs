//! Breadth-first construction of the explicit transition system of a
//! channel-coupled composition.
//!
//! A global state is the tuple of component control states plus the queue
//! contents of every channel. Moves are tried in a fixed order (component,
//! then edge, then handshake partner), and states are numbered in discovery
//! order, so the result is fully deterministic.
//!
//! Channel discipline: a send appends to the rear when the queue has room; a
//! receive consumes the front when it equals the edge's message. On a
//! capacity-zero channel the send and the matching receive of another
//! component fire as one step, labeled with the receive.

use crate::error::ElabError;
use crate::interp::interpret_graph;
use std::collections::{BTreeMap, VecDeque};
use sysgraph_core::{
    eval_merge, Action, ActionInstance, ChannelSystem, StateKey, SystemGraph, TransitionSystem,
    TsState, TsTransition, TypedValue,
};

/// Hard stops for state-space construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationConfig {
    pub max_states: usize,
    pub max_depth: usize,
    pub on_limit: LimitPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitPolicy {
    /// Fail the elaboration when a limit is hit.
    Error,
    /// Stop expanding and mark the result as truncated.
    Truncate,
}

impl Default for ExplorationConfig {
    fn default() -> Self {
        ExplorationConfig {
            max_states: 1_000_000,
            max_depth: 100_000,
            on_limit: LimitPolicy::Error,
        }
    }
}

/// Couple already-lowered components through the composite's channels.
/// Components must not share variables; channels they declare must agree
/// with the composite's domains (capacity and initial contents are taken
/// from the composite alone).
pub fn channel_system(
    composite: &SystemGraph,
    components: &[SystemGraph],
) -> Result<ChannelSystem, ElabError> {
    let mut seen_vars: BTreeMap<String, String> = BTreeMap::new();
    let mut seen_props: BTreeMap<String, String> = BTreeMap::new();
    for g in components {
        for sig in g.signatures.vars() {
            if let Some(owner) = seen_vars.get(&sig.name) {
                if owner != &g.name {
                    return Err(ElabError::SharedMismatch {
                        var: sig.name.clone(),
                    });
                }
            }
            seen_vars.insert(sig.name.clone(), g.name.clone());
        }
        for p in &g.propositions {
            if seen_props.insert(p.name.clone(), g.name.clone()).is_some() {
                return Err(ElabError::DuplicateProposition(p.name.clone()));
            }
        }
        for c in &g.channels {
            match composite.channel(&c.name) {
                None => {
                    return Err(ElabError::ChannelMismatch {
                        chan: c.name.clone(),
                        reason: format!("declared by `{}` but not by the composite", g.name),
                    })
                }
                Some(auth) => {
                    if auth.domain != c.domain {
                        return Err(ElabError::ChannelMismatch {
                            chan: c.name.clone(),
                            reason: format!(
                                "domain {} in `{}` disagrees with the composite's {}",
                                c.domain, g.name, auth.domain
                            ),
                        });
                    }
                }
            }
        }
    }
    let lowered = components
        .iter()
        .map(interpret_graph)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChannelSystem {
        components: lowered,
        channels: composite.channels.clone(),
    })
}

/// The explicit transition system of a single, non-composite graph: its own
/// channels couple it to nothing, so sends enqueue and receives consume from
/// the declared contents.
pub fn explicit_ts(
    g: &SystemGraph,
    cfg: &ExplorationConfig,
) -> Result<TransitionSystem, ElabError> {
    let cts = interpret_graph(g)?;
    explore(
        &ChannelSystem {
            components: vec![cts],
            channels: g.channels.clone(),
        },
        cfg,
    )
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Global {
    locals: Vec<usize>,
    queues: BTreeMap<String, Vec<TypedValue>>,
}

fn global_key(cs: &ChannelSystem, gs: &Global) -> Result<StateKey, ElabError> {
    let evals: Vec<_> = gs
        .locals
        .iter()
        .zip(&cs.components)
        .map(|(&li, c)| c.states[li].eval.clone())
        .collect();
    let eval = eval_merge(&evals)?;
    let mut decls = Vec::new();
    for (&li, c) in gs.locals.iter().zip(&cs.components) {
        decls.extend(c.states[li].decls.iter().cloned());
    }
    Ok(StateKey {
        eval,
        channels: gs.queues.clone(),
        decls,
    })
}

fn labels_of(
    cs: &ChannelSystem,
    gs: &Global,
) -> Result<std::collections::BTreeSet<String>, ElabError> {
    let mut out = std::collections::BTreeSet::new();
    for (&li, c) in gs.locals.iter().zip(&cs.components) {
        out.extend(c.label_state(li)?);
    }
    Ok(out)
}

pub fn explore(cs: &ChannelSystem, cfg: &ExplorationConfig) -> Result<TransitionSystem, ElabError> {
    let mut states: Vec<TsState> = Vec::new();
    let mut key_index: BTreeMap<StateKey, usize> = BTreeMap::new();
    let mut globals: Vec<Global> = Vec::new();
    let mut transitions: Vec<TsTransition> = Vec::new();
    let mut truncated = false;

    let start = Global {
        locals: cs.components.iter().map(|c| c.initial).collect(),
        queues: cs
            .channels
            .iter()
            .map(|c| (c.name.clone(), c.initial.clone()))
            .collect(),
    };
    let start_key = global_key(cs, &start)?;
    states.push(TsState {
        labels: labels_of(cs, &start)?,
        key: start_key.clone(),
    });
    key_index.insert(start_key, 0);
    globals.push(start.clone());

    let mut frontier: VecDeque<(usize, usize)> = VecDeque::from([(0usize, 0usize)]);

    while let Some((si, depth)) = frontier.pop_front() {
        if depth >= cfg.max_depth {
            match cfg.on_limit {
                LimitPolicy::Error => {
                    return Err(ElabError::LimitExceeded {
                        visited: states.len(),
                        depth,
                        limit: cfg.max_depth,
                    })
                }
                LimitPolicy::Truncate => {
                    truncated = true;
                    continue;
                }
            }
        }
        let gs = globals[si].clone();
        for (succ, label) in moves(cs, &gs)? {
            let key = global_key(cs, &succ)?;
            let di = match key_index.get(&key) {
                Some(&d) => d,
                None => {
                    if states.len() >= cfg.max_states {
                        match cfg.on_limit {
                            LimitPolicy::Error => {
                                return Err(ElabError::LimitExceeded {
                                    visited: states.len(),
                                    depth,
                                    limit: cfg.max_states,
                                })
                            }
                            LimitPolicy::Truncate => {
                                truncated = true;
                                continue;
                            }
                        }
                    }
                    let d = states.len();
                    states.push(TsState {
                        labels: labels_of(cs, &succ)?,
                        key: key.clone(),
                    });
                    key_index.insert(key, d);
                    globals.push(succ.clone());
                    frontier.push_back((d, depth + 1));
                    d
                }
            };
            transitions.push(TsTransition {
                src: si,
                action: label,
                dst: di,
            });
        }
    }

    let mut atomic_propositions = std::collections::BTreeSet::new();
    for c in &cs.components {
        for p in &c.propositions {
            atomic_propositions.insert(p.name.clone());
        }
    }

    Ok(TransitionSystem {
        states,
        initials: std::collections::BTreeSet::from([0]),
        transitions,
        atomic_propositions,
        truncated,
    })
}

/// All moves from a global state, in scheduling order: components by index,
/// each component's edges in stored order, handshake partners by index.
fn moves(cs: &ChannelSystem, gs: &Global) -> Result<Vec<(Global, ActionInstance)>, ElabError> {
    let mut out = Vec::new();
    for (i, comp) in cs.components.iter().enumerate() {
        for t in comp.transitions.iter().filter(|t| t.src == gs.locals[i]) {
            match &t.action {
                Action::Named(name) => {
                    let mut succ = gs.clone();
                    succ.locals[i] = t.dst;
                    out.push((succ, ActionInstance::Named(name.clone())));
                }
                Action::Send { chan, .. } => {
                    let value = t.msg.clone().expect("send edges carry their value");
                    let decl = cs.channel(chan).ok_or_else(|| ElabError::ChannelMismatch {
                        chan: chan.clone(),
                        reason: "not declared by the composite".into(),
                    })?;
                    if decl.cap > 0 {
                        let queue = &gs.queues[chan];
                        if queue.len() < decl.cap {
                            let mut succ = gs.clone();
                            succ.locals[i] = t.dst;
                            succ.queues.get_mut(chan).unwrap().push(value.clone());
                            out.push((
                                succ,
                                ActionInstance::Send {
                                    chan: chan.clone(),
                                    value,
                                },
                            ));
                        }
                    } else {
                        // Rendezvous: pair with a matching receive elsewhere.
                        for (j, other) in cs.components.iter().enumerate() {
                            if j == i {
                                continue;
                            }
                            for r in other.transitions.iter().filter(|r| r.src == gs.locals[j]) {
                                let Action::Receive { chan: rc, var } = &r.action else {
                                    continue;
                                };
                                if rc != chan || r.msg.as_ref() != Some(&value) {
                                    continue;
                                }
                                let mut succ = gs.clone();
                                succ.locals[i] = t.dst;
                                succ.locals[j] = r.dst;
                                out.push((
                                    succ,
                                    ActionInstance::Receive {
                                        chan: chan.clone(),
                                        var: var.clone(),
                                    },
                                ));
                            }
                        }
                    }
                }
                Action::Receive { chan, var } => {
                    let decl = cs.channel(chan).ok_or_else(|| ElabError::ChannelMismatch {
                        chan: chan.clone(),
                        reason: "not declared by the composite".into(),
                    })?;
                    if decl.cap == 0 {
                        continue; // fired from the sending side
                    }
                    let queue = &gs.queues[chan];
                    if queue.first() == t.msg.as_ref() && t.msg.is_some() {
                        let mut succ = gs.clone();
                        succ.locals[i] = t.dst;
                        succ.queues.get_mut(chan).unwrap().remove(0);
                        out.push((
                            succ,
                            ActionInstance::Receive {
                                chan: chan.clone(),
                                var: var.clone(),
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> SystemGraph {
        sysgraph_dsl::parse_text(text).expect("test model parses")
    }

    #[test]
    fn declared_contents_seed_the_queues() {
        let g = parse(
            "system t { vars { x: int[0..3] = 0; } chan c: int[0..3] cap 2 init [2, 3]; state a init; state b; trans a -> b on c?x; }",
        );
        let ts = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
        // Only the front message (2) can be received.
        assert_eq!(ts.state_count(), 2);
        assert_eq!(ts.transition_count(), 1);
        assert!(ts.states[1].key.token().contains("x:2"));
        assert_eq!(ts.states[1].key.channels["c"], vec![TypedValue::Int(3)]);
    }

    #[test]
    fn send_blocks_on_a_full_queue() {
        let g = parse(
            "system t { chan c: int[0..1] cap 1 init [0]; state a init; state b; trans a -> b on c!1; }",
        );
        let ts = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
        assert_eq!(ts.state_count(), 1);
        assert_eq!(ts.transition_count(), 0);
    }

    #[test]
    fn state_limit_errors_or_truncates() {
        let g = parse(
            "system t { vars { x: int[0..9] = 0; } chan c: int[0..9] cap 1; state a init; trans a -> a on c!1; trans a -> a on c?x; }",
        );
        let tight = ExplorationConfig {
            max_states: 2,
            max_depth: 100,
            on_limit: LimitPolicy::Error,
        };
        assert!(matches!(
            explicit_ts(&g, &tight),
            Err(ElabError::LimitExceeded { .. })
        ));
        let lax = ExplorationConfig {
            on_limit: LimitPolicy::Truncate,
            ..tight
        };
        let ts = explicit_ts(&g, &lax).unwrap();
        assert!(ts.truncated);
        assert_eq!(ts.state_count(), 2);
    }

    #[test]
    fn depth_limit_is_respected() {
        let g = parse(
            "system t { vars { x: int[0..9] = 0; } state a init; state b { x = 1 }; trans a -> b on go; trans b -> a on back; }",
        );
        let cfg = ExplorationConfig {
            max_states: 100,
            max_depth: 1,
            on_limit: LimitPolicy::Truncate,
        };
        let ts = explicit_ts(&g, &cfg).unwrap();
        assert!(ts.truncated);
    }
}
