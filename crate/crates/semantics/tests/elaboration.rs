//! Elaboration checks against the shared fixture corpus, with hand-computed
//! state and transition counts frozen in assertions.

use std::path::PathBuf;
use sysgraph_core::{ActionInstance, SystemGraph, TransitionSystem, TypedValue};
use sysgraph_dsl::{parse_source, SourceUnit};
use sysgraph_semantics::{
    channel_system, compose_shared, explicit_ts, explore, initial_state, ExplorationConfig,
};

fn fixture(name: &str) -> SystemGraph {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let src = SourceUnit::from_file(&dir.join(name)).expect("fixture readable");
    parse_source(&src).expect("fixture parses")
}

#[test]
fn txclient_initial_state() {
    let g = fixture("txclient.sg");
    let v = initial_state(&g).unwrap();
    assert_eq!(v.to_string(), "{paid:false,status:0,tx:0}");
}

#[test]
fn txclient_explicit_system() {
    let g = fixture("txclient.sg");
    let ts = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
    assert_eq!(ts.state_count(), 6);
    assert_eq!(ts.transition_count(), 6);
    assert!(!ts.truncated);

    // The pending message 3 is consumed first; no other receive fires.
    let receives: Vec<_> = ts
        .transitions
        .iter()
        .filter(|t| matches!(t.action, ActionInstance::Receive { .. }))
        .collect();
    assert_eq!(receives.len(), 1);
    assert_eq!(receives[0].src, 0);
    assert!(ts.states[receives[0].dst].key.token().contains("tx:3"));

    // Terminals: dropped and notified, with empty queue.
    let terminals = ts.terminal_states();
    assert_eq!(terminals.len(), 2);
    for t in terminals {
        let token = ts.states[t].key.token();
        assert!(
            token.ends_with("@dropped") || token.ends_with("@notified"),
            "{token}"
        );
        assert!(token.contains("c:[]"), "{token}");
    }

    // Both cancel and accelerate lead from the same pending state to the
    // same dropped state: parallel edges under different action names.
    let labels: Vec<String> = ts
        .transitions
        .iter()
        .map(|t| t.action.to_string())
        .collect();
    assert!(labels.contains(&"cancel".to_string()));
    assert!(labels.contains(&"accelerate".to_string()));
}

#[test]
fn txclient_labels_follow_propositions() {
    let g = fixture("txclient.sg");
    let ts = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
    let mut paid = 0;
    let mut notified = 0;
    for s in &ts.states {
        if s.labels.contains("PaidGas") {
            paid += 1;
            assert!(s.key.token().contains("status:1"));
        }
        if s.labels.contains("Notified") {
            notified += 1;
            assert!(s.key.token().contains("status:4"));
        }
    }
    assert_eq!((paid, notified), (1, 1));
    assert_eq!(ts.atomic_propositions.len(), 2);
}

#[test]
fn buffered_producer_consumer() {
    let composite = fixture("prodcons.sg");
    let cs = channel_system(
        &composite,
        &[fixture("producer.sg"), fixture("consumer.sg")],
    )
    .unwrap();
    let ts = explore(&cs, &ExplorationConfig::default()).unwrap();
    assert_eq!(ts.state_count(), 4);
    assert_eq!(ts.transition_count(), 3);

    // Send, then receive, then one more send into the full buffer region.
    let kinds: Vec<&str> = ts
        .transitions
        .iter()
        .map(|t| match t.action {
            ActionInstance::Send { .. } => "send",
            ActionInstance::Receive { .. } => "recv",
            ActionInstance::Named(_) => "tau",
        })
        .collect();
    assert_eq!(kinds.iter().filter(|k| **k == "send").count(), 2);
    assert_eq!(kinds.iter().filter(|k| **k == "recv").count(), 1);
}

#[test]
fn rendezvous_producer_consumer() {
    let composite = fixture("prodcons_sync.sg");
    let cs = channel_system(
        &composite,
        &[fixture("producer.sg"), fixture("consumer.sg")],
    )
    .unwrap();
    let ts = explore(&cs, &ExplorationConfig::default()).unwrap();
    assert_eq!(ts.state_count(), 2);
    assert_eq!(ts.transition_count(), 1);
    // The handshake is labeled with the receive.
    assert_eq!(ts.transitions[0].action.to_string(), "c?x");
    // The exchanged value landed in the consumer's variable.
    assert!(ts.states[1].key.token().contains("x:1"));
    assert!(ts.states[1].labels.contains("Got"));
}

#[test]
fn shared_counter_has_two_schedules() {
    let composite = fixture("counter_pair.sg");
    let ts = compose_shared(
        &composite,
        &[fixture("inc_a.sg"), fixture("inc_b.sg")],
        &ExplorationConfig::default(),
    )
    .unwrap();
    assert_eq!(ts.state_count(), 5);
    assert_eq!(ts.transition_count(), 4);

    // Exactly two maximal runs, and both end with n = 2.
    let terminals = ts.terminal_states();
    assert_eq!(terminals.len(), 2);
    for t in &terminals {
        let token = ts.states[*t].key.token();
        assert!(token.contains("n:2"), "{token}");
        assert!(ts.states[*t].labels.contains("Done"));
    }
    let runs = count_maximal_runs(&ts);
    assert_eq!(runs, 2);
}

fn count_maximal_runs(ts: &TransitionSystem) -> usize {
    fn go(ts: &TransitionSystem, s: usize, seen: &mut Vec<usize>) -> usize {
        let succs: Vec<usize> = ts
            .transitions
            .iter()
            .filter(|t| t.src == s)
            .map(|t| t.dst)
            .collect();
        if succs.is_empty() {
            return 1;
        }
        let mut n = 0;
        for d in succs {
            if seen.contains(&d) {
                continue;
            }
            seen.push(d);
            n += go(ts, d, seen);
            seen.pop();
        }
        n
    }
    ts.initials.iter().map(|&i| go(ts, i, &mut vec![i])).sum()
}

#[test]
fn exploration_is_deterministic() {
    let g = fixture("txclient.sg");
    let a = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
    let b = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
    assert_eq!(a.dump(), b.dump());
}

#[test]
fn dump_round_trips_through_the_text_format() {
    let g = fixture("txclient.sg");
    let ts = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
    let text = ts.dump();
    let back = TransitionSystem::parse(&text).unwrap();
    assert_eq!(back.state_count(), ts.state_count());
    assert_eq!(back.transition_count(), ts.transition_count());
    assert_eq!(back.dump(), text);
}

#[test]
fn channel_domains_must_agree_with_the_composite() {
    let composite = fixture("prodcons.sg");
    let mut narrow = fixture("producer.sg");
    narrow.channels[0].domain = sysgraph_core::ValueKind::int(0, 7);
    let err = channel_system(&composite, &[narrow, fixture("consumer.sg")]);
    assert!(matches!(
        err,
        Err(sysgraph_semantics::ElabError::ChannelMismatch { .. })
    ));
}

#[test]
fn queue_order_is_first_in_first_out() {
    let text = "system fifo {\n  vars { x: int[0..3] = 0; }\n  chan c: int[0..3] cap 2 init [1, 2];\n  state a init;\n  state b;\n  state d;\n  trans a -> b on c?x;\n  trans b -> d on c?x;\n}\n";
    let g = sysgraph_dsl::parse_text(text).unwrap();
    let ts = explicit_ts(&g, &ExplorationConfig::default()).unwrap();
    assert_eq!(ts.state_count(), 3);
    let last = &ts.states[2];
    assert!(last.key.token().contains("x:2"), "{}", last.key.token());
    assert_eq!(TypedValue::Int(1), {
        let mid = &ts.states[1];
        mid.key.eval.get("x").cloned().unwrap()
    });
}
