//! Lowering one graph to its conditional transition system.
//!
//! States are (declarator, total evaluation) pairs reached from the initial
//! state; guards are evaluated at the source, so unsatisfiable edges are
//! dropped. Channel actions stay symbolic at this level: a send is always
//! considered possible and a receive is expanded over the channel's whole
//! domain, one edge per message. The channel-aware exploration later keeps
//! only those edges the queue contents actually allow.

use crate::error::ElabError;
use crate::initial::initial_state;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use sysgraph_core::{
    eval_override, Action, CondState, CondTransition, ConditionalTs, Evaluation, MsgExpr,
    SystemGraph, TypedValue,
};

fn send_value(msg: &MsgExpr, v: &Evaluation) -> Result<TypedValue, ElabError> {
    match msg {
        MsgExpr::Lit(val) => Ok(val.clone()),
        MsgExpr::Var(x) => v
            .get(x)
            .cloned()
            .ok_or_else(|| sysgraph_core::CoreError::UnknownVariable(x.clone()).into()),
    }
}

pub fn interpret_graph(g: &SystemGraph) -> Result<ConditionalTs, ElabError> {
    if g.is_composite() {
        return Err(ElabError::Unsupported(format!(
            "`{}` is a parallel composite; lower its components instead",
            g.name
        )));
    }
    let init = initial_state(g)?;
    let mut states: Vec<CondState> = Vec::new();
    let mut index: BTreeMap<CondState, usize> = BTreeMap::new();
    let mut transitions: Vec<CondTransition> = Vec::new();

    let mut intern = |s: CondState,
                      states: &mut Vec<CondState>,
                      queue: &mut std::collections::VecDeque<usize>| {
        if let Some(&i) = index.get(&s) {
            return i;
        }
        let i = states.len();
        states.push(s.clone());
        index.insert(s, i);
        queue.push_back(i);
        i
    };

    let mut queue = std::collections::VecDeque::new();
    let start = CondState {
        decls: vec![g.initial.clone()],
        eval: init,
    };
    intern(start, &mut states, &mut queue);

    while let Some(si) = queue.pop_front() {
        let (decl, eval) = {
            let s = &states[si];
            (s.decls[0].clone(), s.eval.clone())
        };
        for t in g.transitions.iter().filter(|t| t.src == decl) {
            if !t.guard.sat(&eval)? {
                continue;
            }
            let dst_pins = &g
                .declarator(&t.dst)
                .ok_or_else(|| ElabError::UnknownState {
                    system: g.name.clone(),
                    state: t.dst.clone(),
                })?
                .pins;
            match &t.action {
                Action::Receive { chan, var } => {
                    let domain = &g
                        .channel(chan)
                        .ok_or_else(|| ElabError::ChannelMismatch {
                            chan: chan.clone(),
                            reason: "not declared".into(),
                        })?
                        .domain;
                    for m in domain.values() {
                        let bound = eval.update(&g.signatures, var, m.clone())?;
                        let succ = CondState {
                            decls: vec![t.dst.clone()],
                            eval: eval_override(&bound, dst_pins),
                        };
                        let di = intern(succ, &mut states, &mut queue);
                        transitions.push(CondTransition {
                            src: si,
                            guard: t.guard.clone(),
                            action: t.action.clone(),
                            msg: Some(m),
                            dst: di,
                            component: 0,
                        });
                    }
                }
                Action::Send { msg, .. } => {
                    let value = send_value(msg, &eval)?;
                    let succ = CondState {
                        decls: vec![t.dst.clone()],
                        eval: eval_override(&eval, dst_pins),
                    };
                    let di = intern(succ, &mut states, &mut queue);
                    transitions.push(CondTransition {
                        src: si,
                        guard: t.guard.clone(),
                        action: t.action.clone(),
                        msg: Some(value),
                        dst: di,
                        component: 0,
                    });
                }
                Action::Named(_) => {
                    let succ = CondState {
                        decls: vec![t.dst.clone()],
                        eval: eval_override(&eval, dst_pins),
                    };
                    let di = intern(succ, &mut states, &mut queue);
                    transitions.push(CondTransition {
                        src: si,
                        guard: t.guard.clone(),
                        action: t.action.clone(),
                        msg: None,
                        dst: di,
                        component: 0,
                    });
                }
            }
        }
    }

    let mut atoms = BTreeSet::new();
    for p in &g.propositions {
        atoms.extend(p.guard.atoms());
    }
    for r in &g.label_rules {
        atoms.extend(r.guard.atoms());
    }

    Ok(ConditionalTs {
        name: g.name.clone(),
        signatures: g.signatures.clone(),
        states,
        initial: 0,
        transitions,
        propositions: g.propositions.clone(),
        label_rules: g.label_rules.clone(),
        atoms,
        leaf_components: 1,
    })
}

/// For each declarator, the evaluations under which control can sit there,
/// ignoring guards. This over-approximates every guard-respecting run (and
/// every channel discipline: receives range over the full domain), which is
/// what divergence detection wants: a guard comparison is only meaningful on
/// evaluations the declarator could plausibly carry.
pub fn decl_support(g: &SystemGraph) -> Result<BTreeMap<String, BTreeSet<Evaluation>>, ElabError> {
    let init = initial_state(g)?;
    let mut support: BTreeMap<String, BTreeSet<Evaluation>> = BTreeMap::new();
    let mut queue: std::collections::VecDeque<(String, Evaluation)> =
        std::collections::VecDeque::new();
    support
        .entry(g.initial.clone())
        .or_default()
        .insert(init.clone());
    queue.push_back((g.initial.clone(), init));

    while let Some((decl, eval)) = queue.pop_front() {
        for t in g.transitions.iter().filter(|t| t.src == decl) {
            let dst_pins = &g
                .declarator(&t.dst)
                .ok_or_else(|| ElabError::UnknownState {
                    system: g.name.clone(),
                    state: t.dst.clone(),
                })?
                .pins;
            let bases: Vec<Evaluation> = match &t.action {
                Action::Receive { chan, var } => {
                    let domain = &g
                        .channel(chan)
                        .ok_or_else(|| ElabError::ChannelMismatch {
                            chan: chan.clone(),
                            reason: "not declared".into(),
                        })?
                        .domain;
                    domain
                        .values()
                        .into_iter()
                        .map(|m| eval.update(&g.signatures, var, m))
                        .collect::<Result<_, _>>()?
                }
                _ => vec![eval.clone()],
            };
            for base in bases {
                let succ = eval_override(&base, dst_pins);
                if support
                    .entry(t.dst.clone())
                    .or_default()
                    .insert(succ.clone())
                {
                    queue.push_back((t.dst.clone(), succ));
                }
            }
        }
    }
    Ok(support)
}
