//! End-to-end frontend checks against the shared fixture corpus.

use std::path::PathBuf;
use sysgraph_dsl::{parse_source, parse_text, pretty, validate_graph, SourceUnit};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> SourceUnit {
    SourceUnit::from_file(&fixtures_dir().join(name)).expect("fixture readable")
}

#[test]
fn txclient_parses_to_expected_shape() {
    let g = parse_source(&load("txclient.sg")).expect("txclient parses");
    assert_eq!(g.name, "txclient");
    assert_eq!(g.declarators.len(), 6);
    assert_eq!(g.transitions.len(), 7);
    assert_eq!(g.channels.len(), 1);
    assert_eq!(g.initial, "init");
    assert_eq!(g.terminals.len(), 2);
    assert_eq!(g.propositions.len(), 2);
    assert!(validate_graph(&g).is_empty());
}

#[test]
fn every_fixture_parses_cleanly() {
    let mut count = 0;
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("sg") {
            continue;
        }
        let src = SourceUnit::from_file(&path).unwrap();
        if let Err(diags) = parse_source(&src) {
            let rendered: Vec<String> = diags.iter().map(|d| d.render(&src.path)).collect();
            panic!(
                "{} failed to parse:\n{}",
                path.display(),
                rendered.join("\n")
            );
        }
        count += 1;
    }
    assert!(count >= 10, "expected a full corpus, found {count} models");
}

#[test]
fn printing_and_reparsing_is_identity() {
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("sg") {
            continue;
        }
        let src = SourceUnit::from_file(&path).unwrap();
        let g = parse_source(&src).unwrap();
        let printed = pretty(&g);
        let g2 = parse_text(&printed)
            .unwrap_or_else(|d| panic!("reprint of {} failed: {d:?}\n{printed}", path.display()));
        assert_eq!(g, g2, "round trip drifted for {}", path.display());
        assert_eq!(printed, pretty(&g2));
    }
}

#[test]
fn duplicate_state_declarations_are_an_error() {
    let err = parse_text("system t { state init init; state init; }").unwrap_err();
    assert!(err.iter().any(|d| d.code == "dup-decl"), "{err:?}");
}

#[test]
fn two_initial_declarators_are_an_error() {
    let err = parse_text("system t { state a init; state b init; }").unwrap_err();
    assert!(err.iter().any(|d| d.code == "multi-init"), "{err:?}");
}

#[test]
fn empty_source_reports_missing_initial_state() {
    let err = parse_text("").unwrap_err();
    assert_eq!(err.len(), 1);
    assert_eq!(err[0].code, "missing-init");
}

#[test]
fn receive_into_too_small_variable_is_a_kind_mismatch() {
    let text = "system t {\n  vars { status: int[0..4] = 0; }\n  chan c: sym[ok,err] cap 1;\n  state a init;\n  trans a -> a on c?status;\n}\n";
    let err = parse_text(text).unwrap_err();
    assert!(err.iter().any(|d| d.code == "kind-mismatch"), "{err:?}");
}

#[test]
fn diagnostics_render_with_position_and_code() {
    let text = "system t {\n  state a init;\n  prop P := gas == 1;\n}\n";
    let err = parse_text(text).unwrap_err();
    let line = err[0].render("model.sg");
    assert!(
        line.starts_with("model.sg:3:") && line.contains("error[unresolved-name]"),
        "unexpected rendering: {line}"
    );
    assert!(
        line.contains("gas"),
        "message should name the variable: {line}"
    );
}

#[test]
fn declarator_named_init_is_legal() {
    let g = parse_text("system t { state init init; state other; trans init -> other on go; }")
        .unwrap();
    assert_eq!(g.initial, "init");
    assert_eq!(g.transitions[0].src, "init");
}

#[test]
fn unbounded_integer_kind_is_rejected() {
    let err = parse_text("system t { vars { x: int; } state a init; }").unwrap_err();
    assert!(err.iter().any(|d| d.code == "bad-kind"), "{err:?}");
}

#[test]
fn composite_fixture_keeps_component_order() {
    let g = parse_source(&load("prodcons.sg")).unwrap();
    assert!(g.is_composite());
    assert_eq!(
        g.parallel,
        vec!["producer".to_string(), "consumer".to_string()]
    );
    assert!(validate_graph(&g).is_empty());
}
