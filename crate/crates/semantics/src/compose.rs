//! Parallel composition without channels: interleaving over disjoint
//! variables, or coupling through a declared set of shared variables.
//!
//! A composite state is the tuple of component declarators plus one merged
//! evaluation. One component moves per step; its target's pins overwrite
//! the merged evaluation, so writes to shared variables become visible to
//! everyone. Each component must tolerate the others changing shared
//! variables under it: pins constrain entry, not residence.

use crate::error::ElabError;
use crate::explore::{ExplorationConfig, LimitPolicy};
use crate::initial::initial_state;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use sysgraph_core::{
    eval_override, Action, ActionInstance, Evaluation, StateKey, SystemGraph, TransitionSystem,
    TsState, TsTransition,
};

/// Interleave channel-free components with pairwise disjoint variables.
pub fn compose_interleave(
    components: &[SystemGraph],
    cfg: &ExplorationConfig,
) -> Result<TransitionSystem, ElabError> {
    let shell = SystemGraph::empty("interleaving");
    product(&shell, components, cfg)
}

/// Couple channel-free components through the composite's declared shared
/// variables. Every component must declare each shared variable identically;
/// all other variables must be private to one component.
pub fn compose_shared(
    composite: &SystemGraph,
    components: &[SystemGraph],
    cfg: &ExplorationConfig,
) -> Result<TransitionSystem, ElabError> {
    product(composite, components, cfg)
}

fn product(
    composite: &SystemGraph,
    components: &[SystemGraph],
    cfg: &ExplorationConfig,
) -> Result<TransitionSystem, ElabError> {
    if components.is_empty() {
        return Err(ElabError::Unsupported(
            "a composition needs at least one component".to_string(),
        ));
    }
    let shared: BTreeSet<&str> = composite
        .signatures
        .vars()
        .iter()
        .map(|v| v.name.as_str())
        .collect();

    // Ownership and agreement checks.
    let mut owner: BTreeMap<String, usize> = BTreeMap::new();
    for (i, g) in components.iter().enumerate() {
        if !g.channels.is_empty() {
            return Err(ElabError::Unsupported(format!(
                "component `{}` uses channels; variable-coupled composition is channel-free",
                g.name
            )));
        }
        for sig in g.signatures.vars() {
            if shared.contains(sig.name.as_str()) {
                let declared = composite.signatures.get(&sig.name).unwrap();
                if declared != sig {
                    return Err(ElabError::SharedMismatch {
                        var: sig.name.clone(),
                    });
                }
            } else if let Some(&first) = owner.get(&sig.name) {
                if first != i {
                    return Err(ElabError::SharedMismatch {
                        var: sig.name.clone(),
                    });
                }
            } else {
                owner.insert(sig.name.clone(), i);
            }
        }
    }

    let mut props: Vec<&sysgraph_core::Proposition> = Vec::new();
    let mut prop_names = BTreeSet::new();
    for p in composite
        .propositions
        .iter()
        .chain(components.iter().flat_map(|g| g.propositions.iter()))
    {
        if !prop_names.insert(p.name.clone()) {
            return Err(ElabError::DuplicateProposition(p.name.clone()));
        }
        props.push(p);
    }

    // Initial merged evaluation: component initials must agree on shared
    // variables (they each pin or default them independently).
    let initials: Vec<Evaluation> = components
        .iter()
        .map(initial_state)
        .collect::<Result<_, _>>()?;
    let mut merged = Evaluation::empty();
    for v in &initials {
        for (name, value) in v.iter() {
            match merged.get(name) {
                None => merged = merged.with(name, value.clone()),
                Some(existing) if existing == value => {}
                Some(_) => return Err(ElabError::SharedMismatch { var: name.clone() }),
            }
        }
    }

    // Label rules come from whichever graph declared the proposition.
    let rule_sources: Vec<&SystemGraph> = std::iter::once(composite)
        .chain(components.iter())
        .collect();
    let label = |v: &Evaluation| -> Result<BTreeSet<String>, ElabError> {
        let mut out = BTreeSet::new();
        for g in &rule_sources {
            out.extend(g.label_state(v)?);
        }
        Ok(out)
    };

    let start_decls: Vec<String> = components.iter().map(|g| g.initial.clone()).collect();
    let mut states: Vec<TsState> = Vec::new();
    let mut key_index: BTreeMap<StateKey, usize> = BTreeMap::new();
    let mut transitions: Vec<TsTransition> = Vec::new();
    let mut truncated = false;

    let key_of = |decls: &[String], eval: &Evaluation| StateKey {
        eval: eval.clone(),
        channels: BTreeMap::new(),
        decls: decls.to_vec(),
    };

    let start_key = key_of(&start_decls, &merged);
    states.push(TsState {
        labels: label(&merged)?,
        key: start_key.clone(),
    });
    key_index.insert(start_key, 0);
    let mut configs: Vec<(Vec<String>, Evaluation)> = vec![(start_decls, merged)];
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
        let (decls, eval) = configs[si].clone();
        for (i, g) in components.iter().enumerate() {
            for t in g.transitions.iter().filter(|t| t.src == decls[i]) {
                if !t.guard.sat(&eval)? {
                    continue;
                }
                let Action::Named(name) = &t.action else {
                    return Err(ElabError::Unsupported(format!(
                        "component `{}` uses channels; variable-coupled composition is channel-free",
                        g.name
                    )));
                };
                let pins = &g
                    .declarator(&t.dst)
                    .ok_or_else(|| ElabError::UnknownState {
                        system: g.name.clone(),
                        state: t.dst.clone(),
                    })?
                    .pins;
                let succ_eval = eval_override(&eval, pins);
                let mut succ_decls = decls.clone();
                succ_decls[i] = t.dst.clone();
                let key = key_of(&succ_decls, &succ_eval);
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
                            labels: label(&succ_eval)?,
                            key: key.clone(),
                        });
                        key_index.insert(key, d);
                        configs.push((succ_decls, succ_eval));
                        frontier.push_back((d, depth + 1));
                        d
                    }
                };
                transitions.push(TsTransition {
                    src: si,
                    action: ActionInstance::Named(name.clone()),
                    dst: di,
                });
            }
        }
    }

    Ok(TransitionSystem {
        states,
        initials: BTreeSet::from([0]),
        transitions,
        atomic_propositions: prop_names,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> SystemGraph {
        sysgraph_dsl::parse_text(text).expect("test model parses")
    }

    #[test]
    fn interleaving_two_steps_gives_the_grid() {
        let a = parse("system a { state a0 init; state a1; trans a0 -> a1 on left; }");
        let b = parse("system b { state b0 init; state b1; trans b0 -> b1 on right; }");
        let ts = compose_interleave(&[a, b], &ExplorationConfig::default()).unwrap();
        assert_eq!(ts.state_count(), 4);
        assert_eq!(ts.transition_count(), 4);
    }

    #[test]
    fn private_variable_collision_is_rejected() {
        let a = parse("system a { vars { x: bool; } state a0 init; }");
        let b = parse("system b { vars { x: bool; } state b0 init; }");
        assert!(matches!(
            compose_interleave(&[a, b], &ExplorationConfig::default()),
            Err(ElabError::SharedMismatch { .. })
        ));
    }

    #[test]
    fn sharing_requires_identical_declarations() {
        let composite = parse("system c { vars { n: int[0..2] = 0; } parallel a, b; }");
        let a = parse("system a { vars { n: int[0..2] = 0; } state a0 init; }");
        let b = parse("system b { vars { n: int[0..3] = 0; } state b0 init; }");
        assert!(matches!(
            compose_shared(&composite, &[a, b], &ExplorationConfig::default()),
            Err(ElabError::SharedMismatch { .. })
        ));
    }

    #[test]
    fn channel_using_components_are_rejected_here() {
        let a =
            parse("system a { chan c: int[0..1] cap 1; state a0 init; trans a0 -> a0 on c!1; }");
        let b = parse("system b { state b0 init; }");
        assert!(matches!(
            compose_interleave(&[a, b], &ExplorationConfig::default()),
            Err(ElabError::Unsupported(_))
        ));
    }
}
