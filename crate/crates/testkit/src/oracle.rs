//! Reference implementations: quadratic relation checkers and a from-scratch
//! state explorer. Kept intentionally simple so their correctness is visible
//! by inspection; the production algorithms must agree with them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use sysgraph_core::{
    Action, Evaluation, Guard, MsgExpr, StateKey, SystemGraph, TransitionSystem, TypedValue,
};

/// Disjoint union of two systems: indices of `b` are shifted by `a.len()`.
fn union_succs(a: &TransitionSystem, b: &TransitionSystem) -> (Vec<Vec<usize>>, usize) {
    let off = a.state_count();
    let mut succs = vec![Vec::new(); off + b.state_count()];
    for t in &a.transitions {
        succs[t.src].push(t.dst);
    }
    for t in &b.transitions {
        succs[off + t.src].push(off + t.dst);
    }
    (succs, off)
}

fn union_labels<'a>(a: &'a TransitionSystem, b: &'a TransitionSystem) -> Vec<&'a BTreeSet<String>> {
    a.states
        .iter()
        .map(|s| &s.labels)
        .chain(b.states.iter().map(|s| &s.labels))
        .collect()
}

/// Greatest bisimulation by pair removal, then an initial-state check.
/// States are related iff their label sets are equal and every move of each
/// has a related answering move of the other.
pub fn naive_bisim(a: &TransitionSystem, b: &TransitionSystem) -> bool {
    let (succs, off) = union_succs(a, b);
    let labels = union_labels(a, b);
    let n = labels.len();
    let mut related = vec![false; n * n];
    for s in 0..n {
        for t in 0..n {
            related[s * n + t] = labels[s] == labels[t];
        }
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !related[s * n + t] {
                    continue;
                }
                let bad = succs[s]
                    .iter()
                    .any(|&sp| !succs[t].iter().any(|&tp| related[sp * n + tp]))
                    || succs[t]
                        .iter()
                        .any(|&tp| !succs[s].iter().any(|&sp| related[sp * n + tp]));
                if bad {
                    related[s * n + t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    a.initials
        .iter()
        .all(|&ia| b.initials.iter().any(|&ib| related[ia * n + (off + ib)]))
        && b.initials
            .iter()
            .all(|&ib| a.initials.iter().any(|&ia| related[ia * n + (off + ib)]))
}

/// Greatest simulation by pair removal: does `b` simulate `a`?
pub fn naive_sim(a: &TransitionSystem, b: &TransitionSystem) -> bool {
    let (succs, off) = union_succs(a, b);
    let labels = union_labels(a, b);
    let n = labels.len();
    let mut related = vec![false; n * n];
    for s in 0..n {
        for t in 0..n {
            related[s * n + t] = labels[s] == labels[t];
        }
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !related[s * n + t] {
                    continue;
                }
                let bad = succs[s]
                    .iter()
                    .any(|&sp| !succs[t].iter().any(|&tp| related[sp * n + tp]));
                if bad {
                    related[s * n + t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    a.initials
        .iter()
        .all(|&ia| b.initials.iter().any(|&ib| related[ia * n + (off + ib)]))
}

/// The explicit semantics of one graph, written independently of the
/// production pipeline: a plain worklist over (declarator, evaluation,
/// queues) triples, evaluating sends and receives directly against the
/// queue contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTs {
    pub initial: String,
    pub states: BTreeMap<String, BTreeSet<String>>,
    pub edges: BTreeSet<(String, String, String)>,
}

pub fn oracle_explore(g: &SystemGraph) -> OracleTs {
    type Config = (String, Evaluation, BTreeMap<String, Vec<TypedValue>>);

    let mut eval = g.signatures.default_evaluation();
    if let Some(d) = g.declarator(&g.initial) {
        for (k, v) in d.pins.iter() {
            eval = eval.with(k, v.clone());
        }
    }
    assert!(g.initial_guard.sat(&eval).unwrap());
    let queues: BTreeMap<String, Vec<TypedValue>> = g
        .channels
        .iter()
        .map(|c| (c.name.clone(), c.initial.clone()))
        .collect();

    let token = |decl: &str, v: &Evaluation, q: &BTreeMap<String, Vec<TypedValue>>| {
        StateKey {
            eval: v.clone(),
            channels: q.clone(),
            decls: vec![decl.to_string()],
        }
        .token()
    };
    let labels_of = |v: &Evaluation| -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &g.propositions {
            let rules: Vec<&Guard> = g
                .label_rules
                .iter()
                .filter(|r| r.prop == p.name)
                .map(|r| &r.guard)
                .collect();
            let base = p.guard.sat(v).unwrap();
            let allowed = rules.is_empty() || rules.iter().any(|r| r.sat(v).unwrap());
            if base && allowed {
                out.insert(p.name.clone());
            }
        }
        out
    };

    let start: Config = (g.initial.clone(), eval, queues);
    let mut states = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let initial_token = token(&start.0, &start.1, &start.2);
    states.insert(initial_token.clone(), labels_of(&start.1));
    seen.insert(initial_token.clone());
    let mut work: VecDeque<Config> = VecDeque::from([start]);

    while let Some((decl, v, q)) = work.pop_front() {
        let here = token(&decl, &v, &q);
        for t in g.transitions.iter().filter(|t| t.src == decl) {
            if !t.guard.sat(&v).unwrap() {
                continue;
            }
            let pins = &g.declarator(&t.dst).unwrap().pins;
            let apply_pins = |base: &Evaluation| {
                let mut out = base.clone();
                for (k, val) in pins.iter() {
                    out = out.with(k, val.clone());
                }
                out
            };
            let mut fire = |v2: Evaluation,
                            q2: BTreeMap<String, Vec<TypedValue>>,
                            label: String,
                            states: &mut BTreeMap<String, BTreeSet<String>>,
                            edges: &mut BTreeSet<(String, String, String)>,
                            work: &mut VecDeque<Config>| {
                let there = token(&t.dst, &v2, &q2);
                edges.insert((here.clone(), label, there.clone()));
                if seen.insert(there.clone()) {
                    states.insert(there, labels_of(&v2));
                    work.push_back((t.dst.clone(), v2, q2));
                }
            };
            match &t.action {
                Action::Named(name) => {
                    fire(
                        apply_pins(&v),
                        q.clone(),
                        name.clone(),
                        &mut states,
                        &mut edges,
                        &mut work,
                    );
                }
                Action::Send { chan, msg } => {
                    let c = g.channel(chan).unwrap();
                    if c.cap == 0 || q[chan].len() >= c.cap {
                        continue;
                    }
                    let value = match msg {
                        MsgExpr::Lit(x) => x.clone(),
                        MsgExpr::Var(x) => v.get(x).unwrap().clone(),
                    };
                    let mut q2 = q.clone();
                    q2.get_mut(chan).unwrap().push(value.clone());
                    fire(
                        apply_pins(&v),
                        q2,
                        format!("{chan}!{value}"),
                        &mut states,
                        &mut edges,
                        &mut work,
                    );
                }
                Action::Receive { chan, var } => {
                    let c = g.channel(chan).unwrap();
                    if c.cap == 0 || q[chan].is_empty() {
                        continue;
                    }
                    let mut q2 = q.clone();
                    let front = q2.get_mut(chan).unwrap().remove(0);
                    let v2 = apply_pins(&v.with(var, front));
                    fire(
                        v2,
                        q2,
                        format!("{chan}?{var}"),
                        &mut states,
                        &mut edges,
                        &mut work,
                    );
                }
            }
        }
    }

    OracleTs {
        initial: initial_token,
        states,
        edges,
    }
}

/// Flatten a production transition system into the oracle's comparable form.
pub fn comparable(ts: &TransitionSystem) -> OracleTs {
    let token = |i: usize| ts.states[i].key.token();
    OracleTs {
        initial: token(*ts.initials.iter().next().expect("one initial")),
        states: ts
            .states
            .iter()
            .map(|s| (s.key.token(), s.labels.clone()))
            .collect(),
        edges: ts
            .transitions
            .iter()
            .map(|t| (token(t.src), t.action.to_string(), token(t.dst)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_ts, TsShape};
    use crate::load_fixture;

    #[test]
    fn bisim_is_reflexive_and_respects_label_flips() {
        for seed in 0..10 {
            let ts = random_ts(seed, TsShape::default());
            assert!(naive_bisim(&ts, &ts), "seed {seed}");
            assert!(naive_sim(&ts, &ts), "seed {seed}");
        }
    }

    #[test]
    fn oracle_explorer_matches_the_frozen_txclient_shape() {
        let g = load_fixture("txclient.sg");
        let o = oracle_explore(&g);
        assert_eq!(o.states.len(), 6);
        assert_eq!(o.edges.len(), 6);
        assert!(o.initial.ends_with("@init"));
    }

    #[test]
    fn production_explorer_agrees_with_the_oracle_on_leaf_fixtures() {
        for name in [
            "txclient.sg",
            "txclient_no_accel.sg",
            "consumer.sg",
            "inc_a.sg",
            "inc_ja.sg",
            "chain.sg",
        ] {
            let g = load_fixture(name);
            let fast = sysgraph_semantics::explicit_ts(&g, &Default::default()).unwrap();
            assert_eq!(comparable(&fast), oracle_explore(&g), "{name}");
        }
    }
}
