//! Name resolution: raw syntax tree to a system graph plus a span index for
//! later semantic checks.
//!
//! Identifier-vs-literal ambiguities are settled here (a bare identifier in
//! value position is a variable reference when one is declared, otherwise a
//! symbol literal). Anything this pass cannot prove wrong is left in the
//! graph for the semantic validator, which owns the rule list.

use crate::ast::{self, Item, RawAction, RawKind, RawValue, Unit};
use crate::diag::{Diagnostic, Span};
use crate::validate::{EntityKey, SpanIndex};
use sysgraph_core::{
    Action, Atom, ChannelDecl, EmbedDecl, Evaluation, Guard, LabelRule, MsgExpr, Operand,
    Proposition, SignatureSet, StateDeclarator, SystemGraph, TransitionDecl, TypedValue, ValueKind,
    VarSignature,
};

pub fn resolve(unit: &Unit) -> (SystemGraph, SpanIndex, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut idx = SpanIndex::default();
    let mut g = SystemGraph::empty(unit.name.clone());
    g.is_module = unit.is_module;
    idx.insert(EntityKey::Unit, unit.name_span);

    // First pass: variable signatures, so later value positions can resolve.
    let mut vars: Vec<VarSignature> = Vec::new();
    for item in &unit.items {
        let Item::Vars(decls) = item else { continue };
        for d in decls {
            idx.insert(EntityKey::Var(d.name.clone()), d.span);
            if is_reserved(&d.name) {
                diags.push(Diagnostic::error(
                    d.span,
                    "reserved-name",
                    format!("`{}` cannot be used as a variable name", d.name),
                ));
                continue;
            }
            if vars.iter().any(|v| v.name == d.name) {
                diags.push(Diagnostic::error(
                    d.span,
                    "dup-var",
                    format!("variable `{}` is declared twice", d.name),
                ));
                continue;
            }
            let kind = match lower_kind(&d.kind, d.kind_span, &mut diags) {
                Some(k) => k,
                None => continue,
            };
            let default = d.default.as_ref().map(|(v, vspan)| {
                let value = lower_value(v);
                if !kind.admits(&value) {
                    diags.push(Diagnostic::error(
                        *vspan,
                        "kind-mismatch",
                        format!(
                            "default value `{value}` is outside the domain {kind} of `{}`",
                            d.name
                        ),
                    ));
                }
                value
            });
            let default = match default {
                Some(v) if kind.admits(&v) => Some(v),
                _ => None,
            };
            vars.push(VarSignature {
                name: d.name.clone(),
                kind,
                default,
            });
        }
    }
    g.signatures = match SignatureSet::new(vars) {
        Ok(s) => s,
        Err(e) => {
            diags.push(Diagnostic::error(
                unit.name_span,
                "invalid",
                format!("variable declarations are inconsistent: {e}"),
            ));
            SignatureSet::default()
        }
    };

    // Channels next: message resolution wants their domains.
    for item in &unit.items {
        let Item::Chan(c) = item else { continue };
        idx.insert(EntityKey::Chan(c.name.clone()), c.span);
        if is_reserved(&c.name) {
            diags.push(Diagnostic::error(
                c.span,
                "reserved-name",
                format!("`{}` cannot be used as a channel name", c.name),
            ));
            continue;
        }
        let Some(domain) = lower_kind(&c.kind, c.kind_span, &mut diags) else {
            continue;
        };
        let initial = c
            .initial
            .iter()
            .map(|(v, _)| lower_value_in_domain(v, &domain))
            .collect();
        g.channels.push(ChannelDecl {
            name: c.name.clone(),
            domain,
            cap: c.cap as usize,
            initial,
        });
    }

    // Everything else, in source order.
    let mut trans_count = 0usize;
    let mut rule_count = 0usize;
    let mut embed_count = 0usize;
    for item in &unit.items {
        match item {
            Item::Vars(_) | Item::Chan(_) => {}
            Item::State(s) => {
                idx.insert(EntityKey::Decl(s.name.clone()), s.span);
                let mut seen = std::collections::BTreeSet::new();
                let mut pairs = Vec::new();
                for pin in &s.pins {
                    if !seen.insert(pin.var.clone()) {
                        diags.push(Diagnostic::error(
                            pin.var_span,
                            "dup-var",
                            format!("variable `{}` is pinned twice", pin.var),
                        ));
                        continue;
                    }
                    let value = match g.signatures.get(&pin.var) {
                        Some(sig) => lower_value_in_domain(&pin.value, &sig.kind),
                        None => lower_value(&pin.value),
                    };
                    pairs.push((pin.var.clone(), value));
                }
                g.declarators.push(StateDeclarator::new(
                    s.name.clone(),
                    Evaluation::from_pairs(pairs),
                ));
                if s.is_init {
                    if g.initial.is_empty() {
                        g.initial = s.name.clone();
                        if let Some(e) = &s.init_guard {
                            idx.insert(EntityKey::InitialGuard, e.span());
                            g.initial_guard = lower_expr(e, &g.signatures);
                        }
                    } else {
                        diags.push(Diagnostic::error(
                            s.span,
                            "multi-init",
                            format!("`{}` cannot be initial: `{}` already is", s.name, g.initial),
                        ));
                    }
                }
            }
            Item::Trans(t) => {
                idx.insert(EntityKey::Trans(trans_count), t.span);
                let guard = t
                    .guard
                    .as_ref()
                    .map(|e| lower_expr(e, &g.signatures))
                    .unwrap_or(Guard::True);
                let action = match &t.action {
                    RawAction::Named(n) => Action::Named(n.clone()),
                    RawAction::Send { chan, msg } => {
                        let domain = g.channel(chan).map(|c| c.domain.clone());
                        let msg = lower_msg(&msg.0, domain.as_ref(), &g.signatures);
                        Action::Send {
                            chan: chan.clone(),
                            msg,
                        }
                    }
                    RawAction::Recv { chan, var } => Action::Receive {
                        chan: chan.clone(),
                        var: var.0.clone(),
                    },
                };
                g.transitions.push(TransitionDecl {
                    src: t.src.0.clone(),
                    dst: t.dst.0.clone(),
                    guard,
                    action,
                });
                trans_count += 1;
            }
            Item::Prop(p) => {
                idx.insert(EntityKey::Prop(p.name.clone()), p.span);
                if is_reserved(&p.name) {
                    diags.push(Diagnostic::error(
                        p.span,
                        "reserved-name",
                        format!("`{}` cannot be used as a proposition name", p.name),
                    ));
                    continue;
                }
                g.propositions.push(Proposition {
                    name: p.name.clone(),
                    guard: lower_expr(&p.expr, &g.signatures),
                });
            }
            Item::Label(l) => {
                idx.insert(EntityKey::Rule(rule_count), l.span);
                g.label_rules.push(LabelRule {
                    guard: lower_expr(&l.expr, &g.signatures),
                    prop: l.prop.0.clone(),
                });
                rule_count += 1;
            }
            Item::Terminal(names) => {
                for (name, span) in names {
                    idx.insert(EntityKey::Terminal(name.clone()), *span);
                    g.terminals.insert(name.clone());
                }
            }
            Item::Parallel(names) => {
                for (name, span) in names {
                    idx.insert(EntityKey::Parallel(name.clone()), *span);
                    g.parallel.push(name.clone());
                }
            }
            Item::Embed { span, inner, at } => {
                idx.insert(EntityKey::Embed(embed_count), *span);
                g.embeds.push(EmbedDecl {
                    inner: inner.0.clone(),
                    at: at.0.clone(),
                });
                embed_count += 1;
            }
        }
    }

    (g, idx, diags)
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "true" | "false")
}

fn lower_kind(kind: &RawKind, span: Span, diags: &mut Vec<Diagnostic>) -> Option<ValueKind> {
    match kind {
        RawKind::Bool => Some(ValueKind::Bool),
        RawKind::Int(lo, hi) => {
            if lo > hi {
                diags.push(Diagnostic::error(
                    span,
                    "bad-kind",
                    format!("empty integer range int[{lo}..{hi}]"),
                ));
                return None;
            }
            Some(ValueKind::Int { lo: *lo, hi: *hi })
        }
        RawKind::Sym(names) => {
            let mut seen = std::collections::BTreeSet::new();
            for n in names {
                if is_reserved(n) {
                    diags.push(Diagnostic::error(
                        span,
                        "reserved-name",
                        format!("`{n}` cannot be used as an enumerant"),
                    ));
                    return None;
                }
                if !seen.insert(n.clone()) {
                    diags.push(Diagnostic::error(
                        span,
                        "bad-kind",
                        format!("enumerant `{n}` is listed twice"),
                    ));
                    return None;
                }
            }
            Some(ValueKind::Sym {
                enumerants: names.clone(),
            })
        }
    }
}

/// Literal lowering with no context: identifiers become symbols.
fn lower_value(v: &RawValue) -> TypedValue {
    match v {
        RawValue::Bool(b) => TypedValue::Bool(*b),
        RawValue::Int(n) => TypedValue::Int(*n),
        RawValue::Ident(s) => TypedValue::Sym(s.clone()),
    }
}

/// Literal lowering where the expected domain is known; identifiers still
/// become symbols (the validator reports non-enumerants).
fn lower_value_in_domain(v: &RawValue, _domain: &ValueKind) -> TypedValue {
    lower_value(v)
}

fn lower_msg(v: &RawValue, domain: Option<&ValueKind>, sigs: &SignatureSet) -> MsgExpr {
    match v {
        RawValue::Bool(b) => MsgExpr::Lit(TypedValue::Bool(*b)),
        RawValue::Int(n) => MsgExpr::Lit(TypedValue::Int(*n)),
        RawValue::Ident(s) => {
            if sigs.get(s).is_some() {
                MsgExpr::Var(s.clone())
            } else if let Some(ValueKind::Sym { .. }) = domain {
                MsgExpr::Lit(TypedValue::Sym(s.clone()))
            } else {
                MsgExpr::Var(s.clone())
            }
        }
    }
}

fn lower_expr(e: &ast::Expr, sigs: &SignatureSet) -> Guard {
    match e {
        ast::Expr::True(_) => Guard::True,
        ast::Expr::False(_) => Guard::False,
        ast::Expr::Bare(name, _) => Guard::Atom(Atom::eq_lit(name.clone(), TypedValue::Bool(true))),
        ast::Expr::Cmp { var, op, rhs } => {
            let rhs = match &rhs.0 {
                RawValue::Bool(b) => Operand::Lit(TypedValue::Bool(*b)),
                RawValue::Int(n) => Operand::Lit(TypedValue::Int(*n)),
                RawValue::Ident(s) => {
                    if sigs.get(s).is_some() {
                        Operand::Var(s.clone())
                    } else {
                        match sigs.get(&var.0).map(|v| &v.kind) {
                            Some(ValueKind::Sym { .. }) => Operand::Lit(TypedValue::Sym(s.clone())),
                            _ => Operand::Var(s.clone()),
                        }
                    }
                }
            };
            Guard::Atom(Atom::new(var.0.clone(), *op, rhs))
        }
        ast::Expr::Not(inner, _) => Guard::not(lower_expr(inner, sigs)),
        ast::Expr::And(a, b) => Guard::and(lower_expr(a, sigs), lower_expr(b, sigs)),
        ast::Expr::Or(a, b) => Guard::or(lower_expr(a, sigs), lower_expr(b, sigs)),
        ast::Expr::Implies(a, b) => Guard::implies(lower_expr(a, sigs), lower_expr(b, sigs)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::lex;
    use crate::parser::parse_tokens;

    fn resolve_text(text: &str) -> (SystemGraph, Vec<Diagnostic>) {
        let unit = parse_tokens(lex(text).unwrap()).unwrap();
        let (g, _, d) = resolve(&unit);
        (g, d)
    }

    #[test]
    fn builds_signatures_and_defaults() {
        let (g, d) = resolve_text(
            "system t { vars { status: int[0..4] = 0; paid: bool; mode: sym[idle,busy] = busy; } state s init; }",
        );
        assert!(d.is_empty());
        let sigs = &g.signatures;
        assert_eq!(sigs.vars().len(), 3);
        assert_eq!(
            sigs.get("mode").unwrap().default,
            Some(TypedValue::Sym("busy".into()))
        );
        assert_eq!(sigs.get("paid").unwrap().default, None);
        let init = sigs.default_evaluation();
        assert_eq!(init.get("status"), Some(&TypedValue::Int(0)));
        assert_eq!(init.get("mode"), Some(&TypedValue::Sym("busy".into())));
    }

    #[test]
    fn sym_literal_vs_variable_reference() {
        let (g, d) = resolve_text(
            "system t { vars { mode: sym[idle,busy]; other: sym[idle,busy]; } state s init; prop P := mode == idle; prop Q := mode == other; }",
        );
        assert!(d.is_empty());
        match &g.propositions[0].guard {
            Guard::Atom(a) => assert_eq!(a.rhs, Operand::Lit(TypedValue::Sym("idle".into()))),
            other => panic!("unexpected guard: {other:?}"),
        }
        match &g.propositions[1].guard {
            Guard::Atom(a) => assert_eq!(a.rhs, Operand::Var("other".into())),
            other => panic!("unexpected guard: {other:?}"),
        }
    }

    #[test]
    fn duplicate_variables_are_reported_once() {
        let (g, d) = resolve_text("system t { vars { x: bool; x: bool; } state s init; }");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "dup-var");
        assert_eq!(g.signatures.vars().len(), 1);
    }

    #[test]
    fn second_initial_declarator_is_flagged() {
        let (g, d) = resolve_text("system t { state a init; state b init; }");
        assert_eq!(g.initial, "a");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "multi-init");
    }

    #[test]
    fn empty_range_is_flagged() {
        let (_, d) = resolve_text("system t { vars { x: int[4..2]; } state s init; }");
        assert!(d.iter().any(|x| x.code == "bad-kind"));
    }

    #[test]
    fn reserved_names_are_rejected() {
        let (_, d) = resolve_text("system t { vars { true: bool; } state s init; }");
        assert!(d.iter().any(|x| x.code == "reserved-name"));
    }

    #[test]
    fn guard_omission_means_tautology() {
        let (g, d) = resolve_text("system t { state a init; trans a -> a on go; }");
        assert!(d.is_empty());
        assert_eq!(g.transitions[0].guard, Guard::True);
    }
}
