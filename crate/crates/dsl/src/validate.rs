//! Semantic validation of a resolved system graph.
//!
//! The checks here assume a structurally complete graph (resolution already
//! ran); they confirm that every name refers to something, every value fits
//! its declared domain, and channel endpoints agree on what flows through.

use crate::diag::{Diagnostic, Span};
use std::collections::BTreeSet;
use sysgraph_core::{Action, CoreError, Guard, MsgExpr, SignatureSet, SystemGraph};

/// What a span was recorded for. Keys are stable across a reparse of the
/// same source, so diagnostics can be attributed after resolution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntityKey {
    Unit,
    Var(String),
    Chan(String),
    Decl(String),
    Trans(usize),
    Prop(String),
    Rule(usize),
    Terminal(String),
    Parallel(String),
    Embed(usize),
    InitialGuard,
}

#[derive(Debug, Clone, Default)]
pub struct SpanIndex {
    map: std::collections::BTreeMap<EntityKey, Span>,
}

impl SpanIndex {
    pub fn insert(&mut self, key: EntityKey, span: Span) {
        self.map.entry(key).or_insert(span);
    }

    pub fn get(&self, key: &EntityKey) -> Span {
        self.map.get(key).copied().unwrap_or_else(Span::whole_file)
    }
}

/// Validate a graph built by hand (or deserialized), with no source spans.
pub fn validate_graph(g: &SystemGraph) -> Vec<Diagnostic> {
    semantic_diagnostics(g, &SpanIndex::default())
}

fn code_for(e: &CoreError) -> &'static str {
    match e {
        CoreError::UnknownVariable(_) => "unresolved-name",
        CoreError::KindMismatch { .. } | CoreError::BadComparison { .. } => "kind-mismatch",
        CoreError::UnknownEnumerant { .. } => "unknown-enumerant",
        _ => "invalid",
    }
}

fn check_guard(
    g: &Guard,
    sigs: &SignatureSet,
    span: Span,
    context: &str,
    out: &mut Vec<Diagnostic>,
) {
    if let Err(e) = g.check(sigs) {
        out.push(Diagnostic::error(
            span,
            code_for(&e),
            format!("{context}: {e}"),
        ));
    }
}

pub(crate) fn semantic_diagnostics(g: &SystemGraph, idx: &SpanIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    if g.is_composite() {
        composite_shape(g, idx, &mut out);
    } else if !g.is_module && g.initial.is_empty() {
        out.push(Diagnostic::error(
            idx.get(&EntityKey::Unit),
            "missing-init",
            format!("system `{}` declares no initial state", g.name),
        ));
    }
    if !g.initial.is_empty() && g.declarator(&g.initial).is_none() {
        out.push(Diagnostic::error(
            idx.get(&EntityKey::Unit),
            "unknown-state",
            format!("initial state `{}` is not declared", g.initial),
        ));
    }

    signatures(g, idx, &mut out);
    channels(g, idx, &mut out);
    declarators(g, idx, &mut out);
    if g.initial_guard != Guard::True {
        check_guard(
            &g.initial_guard,
            &g.signatures,
            idx.get(&EntityKey::InitialGuard),
            "initial constraint",
            &mut out,
        );
    }
    if !g.is_composite() {
        transitions(g, idx, &mut out);
        for name in &g.terminals {
            if g.declarator(name).is_none() {
                out.push(Diagnostic::error(
                    idx.get(&EntityKey::Terminal(name.clone())),
                    "unknown-state",
                    format!("terminal `{name}` is not a declared state"),
                ));
            }
        }
        for (i, e) in g.embeds.iter().enumerate() {
            if g.declarator(&e.at).is_none() {
                out.push(Diagnostic::error(
                    idx.get(&EntityKey::Embed(i)),
                    "unknown-state",
                    format!("embedding site `{}` is not a declared state", e.at),
                ));
            }
        }
    }
    propositions(g, idx, &mut out);

    out.sort_by(|a, b| (a.span.line, a.span.col, &a.code).cmp(&(b.span.line, b.span.col, &b.code)));
    out
}

fn composite_shape(g: &SystemGraph, idx: &SpanIndex, out: &mut Vec<Diagnostic>) {
    let span = idx.get(&EntityKey::Unit);
    if !g.declarators.is_empty() || !g.transitions.is_empty() || !g.embeds.is_empty() {
        out.push(Diagnostic::error(
            span,
            "bad-composite",
            "a parallel composite lists components only; states, transitions, and embeds belong in the components".to_string(),
        ));
    }
    if g.is_module {
        out.push(Diagnostic::error(
            span,
            "bad-composite",
            "a module cannot be a parallel composite".to_string(),
        ));
    }
    if !g.terminals.is_empty() {
        out.push(Diagnostic::error(
            span,
            "bad-composite",
            "composites do not declare terminals; components do".to_string(),
        ));
    }
    if !g.signatures.vars().is_empty() && !g.channels.is_empty() {
        out.push(Diagnostic::error(
            span,
            "unsupported",
            "parallel components may couple through shared variables or channels, not both"
                .to_string(),
        ));
    }
    let mut seen = BTreeSet::new();
    for name in &g.parallel {
        if !seen.insert(name.clone()) {
            out.push(Diagnostic::error(
                idx.get(&EntityKey::Parallel(name.clone())),
                "dup-name",
                format!("component `{name}` is listed twice"),
            ));
        }
    }
}

fn signatures(g: &SystemGraph, idx: &SpanIndex, out: &mut Vec<Diagnostic>) {
    for sig in g.signatures.vars() {
        let span = idx.get(&EntityKey::Var(sig.name.clone()));
        if !sig.kind.is_well_formed() {
            out.push(Diagnostic::error(
                span,
                "bad-kind",
                format!("variable `{}` has an empty domain {}", sig.name, sig.kind),
            ));
        }
        if let Some(d) = &sig.default {
            if !sig.kind.admits(d) {
                out.push(Diagnostic::error(
                    span,
                    "kind-mismatch",
                    format!(
                        "default `{d}` is outside the domain {} of `{}`",
                        sig.kind, sig.name
                    ),
                ));
            }
        }
    }
}

fn channels(g: &SystemGraph, idx: &SpanIndex, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for c in &g.channels {
        let span = idx.get(&EntityKey::Chan(c.name.clone()));
        if !seen.insert(c.name.clone()) {
            out.push(Diagnostic::error(
                span,
                "dup-chan",
                format!("channel `{}` is declared twice", c.name),
            ));
            continue;
        }
        if g.signatures.get(&c.name).is_some() {
            out.push(Diagnostic::error(
                span,
                "dup-name",
                format!("`{}` names both a variable and a channel", c.name),
            ));
        }
        if !c.domain.is_well_formed() {
            out.push(Diagnostic::error(
                span,
                "bad-kind",
                format!("channel `{}` has an empty domain {}", c.name, c.domain),
            ));
        }
        if c.cap == 0 && !c.initial.is_empty() {
            out.push(Diagnostic::error(
                span,
                "chan-overflow",
                format!(
                    "rendezvous channel `{}` cannot hold initial contents",
                    c.name
                ),
            ));
        } else if c.initial.len() > c.cap {
            out.push(Diagnostic::error(
                span,
                "chan-overflow",
                format!(
                    "channel `{}` starts with {} messages but holds at most {}",
                    c.name,
                    c.initial.len(),
                    c.cap
                ),
            ));
        }
        for v in &c.initial {
            if !c.domain.admits(v) {
                out.push(Diagnostic::error(
                    span,
                    "kind-mismatch",
                    format!(
                        "initial message `{v}` is outside the domain {} of channel `{}`",
                        c.domain, c.name
                    ),
                ));
            }
        }
    }
}

fn declarators(g: &SystemGraph, idx: &SpanIndex, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for d in &g.declarators {
        let span = idx.get(&EntityKey::Decl(d.name.clone()));
        if !seen.insert(d.name.clone()) {
            out.push(Diagnostic::error(
                span,
                "dup-decl",
                format!("state `{}` is declared twice", d.name),
            ));
            continue;
        }
        for (var, value) in d.pins.iter() {
            match g.signatures.get(var) {
                None => out.push(Diagnostic::error(
                    span,
                    "unresolved-name",
                    format!("state `{}` pins unknown variable `{var}`", d.name),
                )),
                Some(sig) => {
                    if !sig.kind.admits(value) {
                        out.push(Diagnostic::error(
                            span,
                            "kind-mismatch",
                            format!(
                                "state `{}` pins `{var}` to `{value}`, outside its domain {}",
                                d.name, sig.kind
                            ),
                        ));
                    }
                }
            }
        }
    }
}

fn transitions(g: &SystemGraph, idx: &SpanIndex, out: &mut Vec<Diagnostic>) {
    for (i, t) in g.transitions.iter().enumerate() {
        let span = idx.get(&EntityKey::Trans(i));
        for end in [&t.src, &t.dst] {
            if g.declarator(end).is_none() {
                out.push(Diagnostic::error(
                    span,
                    "unknown-state",
                    format!("transition endpoint `{end}` is not a declared state"),
                ));
            }
        }
        check_guard(&t.guard, &g.signatures, span, "transition guard", out);
        match &t.action {
            Action::Named(_) => {}
            Action::Send { chan, msg } => match g.channel(chan) {
                None => out.push(Diagnostic::error(
                    span,
                    "unknown-channel",
                    format!("send on undeclared channel `{chan}`"),
                )),
                Some(c) => match msg {
                    MsgExpr::Lit(v) => {
                        if !c.domain.admits(v) {
                            out.push(Diagnostic::error(
                                span,
                                "kind-mismatch",
                                format!(
                                    "message `{v}` is outside the domain {} of channel `{chan}`",
                                    c.domain
                                ),
                            ));
                        }
                    }
                    MsgExpr::Var(x) => match g.signatures.get(x) {
                        None => out.push(Diagnostic::error(
                            span,
                            "unresolved-name",
                            format!("message expression names unknown variable `{x}`"),
                        )),
                        Some(sig) => {
                            if !c.domain.contains(&sig.kind) {
                                out.push(Diagnostic::error(
                                    span,
                                    "kind-mismatch",
                                    format!(
                                        "variable `{x}`: {} may hold values outside channel `{chan}`: {}",
                                        sig.kind, c.domain
                                    ),
                                ));
                            }
                        }
                    },
                },
            },
            Action::Receive { chan, var } => {
                let domain = match g.channel(chan) {
                    None => {
                        out.push(Diagnostic::error(
                            span,
                            "unknown-channel",
                            format!("receive on undeclared channel `{chan}`"),
                        ));
                        continue;
                    }
                    Some(c) => &c.domain,
                };
                match g.signatures.get(var) {
                    None => out.push(Diagnostic::error(
                        span,
                        "unresolved-name",
                        format!("receive binds unknown variable `{var}`"),
                    )),
                    Some(sig) => {
                        if !sig.kind.contains(domain) {
                            out.push(Diagnostic::error(
                                span,
                                "kind-mismatch",
                                format!(
                                    "variable `{var}`: {} cannot hold every message of channel `{chan}`: {}",
                                    sig.kind, domain
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
}

fn propositions(g: &SystemGraph, idx: &SpanIndex, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for p in &g.propositions {
        let span = idx.get(&EntityKey::Prop(p.name.clone()));
        if !seen.insert(p.name.clone()) {
            out.push(Diagnostic::error(
                span,
                "dup-prop",
                format!("proposition `{}` is declared twice", p.name),
            ));
            continue;
        }
        if g.signatures.get(&p.name).is_some() {
            out.push(Diagnostic::error(
                span,
                "dup-name",
                format!("`{}` names both a variable and a proposition", p.name),
            ));
        }
        check_guard(
            &p.guard,
            &g.signatures,
            span,
            &format!("proposition `{}`", p.name),
            out,
        );
    }
    for (i, r) in g.label_rules.iter().enumerate() {
        let span = idx.get(&EntityKey::Rule(i));
        if g.proposition(&r.prop).is_none() {
            out.push(Diagnostic::error(
                span,
                "unknown-prop",
                format!("label rule targets undeclared proposition `{}`", r.prop),
            ));
        }
        check_guard(&r.guard, &g.signatures, span, "label rule", out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::lex;
    use crate::parser::parse_tokens;
    use crate::resolve::resolve;

    fn diags_for(text: &str) -> Vec<Diagnostic> {
        let unit = parse_tokens(lex(text).unwrap()).unwrap();
        let (g, idx, mut d) = resolve(&unit);
        d.extend(semantic_diagnostics(&g, &idx));
        d
    }

    fn codes(text: &str) -> Vec<String> {
        diags_for(text).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn clean_system_has_no_diagnostics() {
        assert!(diags_for(
            "system t { vars { x: bool; } state a init; state b { x = true }; trans a -> b on go; prop P := x; terminal b; }"
        )
        .is_empty());
    }

    #[test]
    fn receive_variable_must_cover_channel_domain() {
        let c = codes(
            "system t { vars { status: int[0..4]; } chan c: sym[ok,err] cap 1; state a init; trans a -> a on c?status; }",
        );
        assert_eq!(c, vec!["kind-mismatch"]);
    }

    #[test]
    fn narrower_receive_variable_is_also_rejected() {
        let c = codes(
            "system t { vars { x: int[0..2]; } chan c: int[0..5] cap 1; state a init; trans a -> a on c?x; }",
        );
        assert_eq!(c, vec!["kind-mismatch"]);
    }

    #[test]
    fn wider_receive_variable_is_fine() {
        assert!(diags_for(
            "system t { vars { x: int[0..9]; } chan c: int[0..5] cap 1; state a init; trans a -> a on c?x; }"
        )
        .is_empty());
    }

    #[test]
    fn unresolved_proposition_variable() {
        let c = codes("system t { state a init; prop P := gas == 1; }");
        assert_eq!(c, vec!["unresolved-name"]);
    }

    #[test]
    fn missing_initial_state() {
        let c = codes("system t { state a; }");
        assert_eq!(c, vec!["missing-init"]);
    }

    #[test]
    fn module_needs_no_initial_state() {
        assert!(diags_for("module m { state a; trans a -> a on spin; }").is_empty());
    }

    #[test]
    fn unknown_transition_endpoint() {
        let c = codes("system t { state a init; trans a -> b on go; }");
        assert_eq!(c, vec!["unknown-state"]);
    }

    #[test]
    fn channel_initial_contents_respect_capacity() {
        let c = codes("system t { chan c: int[0..1] cap 1 init [0, 1]; state a init; }");
        assert_eq!(c, vec!["chan-overflow"]);
        let c = codes("system t { chan c: int[0..1] cap 0 init [0]; state a init; }");
        assert_eq!(c, vec!["chan-overflow"]);
    }

    #[test]
    fn composite_may_not_mix_coupling_styles() {
        let c =
            codes("system t { vars { n: int[0..2]; } chan c: int[0..1] cap 1; parallel a, b; }");
        assert_eq!(c, vec!["unsupported"]);
    }

    #[test]
    fn composite_carries_no_states() {
        let c = codes("system t { state a init; parallel x, y; }");
        assert_eq!(c, vec!["bad-composite"]);
    }

    #[test]
    fn unknown_enumerant_in_comparison() {
        let c = codes(
            "system t { vars { mode: sym[idle,busy]; } state a init; prop P := mode == stopped; }",
        );
        assert_eq!(c, vec!["unknown-enumerant"]);
    }

    #[test]
    fn label_rule_targets_declared_proposition() {
        let c = codes("system t { vars { x: bool; } state a init; label when x => Nope; }");
        assert_eq!(c, vec!["unknown-prop"]);
    }
}
