//! Canonical rendering of a system graph back to source text.
//!
//! The output reparses to a structurally equal graph, which gives the
//! round-trip guarantee the tests lean on. Sections come out in a fixed
//! order regardless of how the source interleaved them.

use std::fmt::Write;
use sysgraph_core::{Action, Atom, Guard, MsgExpr, Operand, SystemGraph, TypedValue, ValueKind};

pub fn pretty(g: &SystemGraph) -> String {
    let mut out = String::new();
    let kw = if g.is_module { "module" } else { "system" };
    let _ = writeln!(out, "{kw} {} {{", g.name);

    if !g.signatures.vars().is_empty() {
        let _ = writeln!(out, "  vars {{");
        for sig in g.signatures.vars() {
            let _ = write!(out, "    {}: {}", sig.name, render_kind(&sig.kind));
            if let Some(d) = &sig.default {
                let _ = write!(out, " = {d}");
            }
            let _ = writeln!(out, ";");
        }
        let _ = writeln!(out, "  }}");
    }

    for c in &g.channels {
        let _ = write!(
            out,
            "  chan {}: {} cap {}",
            c.name,
            render_kind(&c.domain),
            c.cap
        );
        if !c.initial.is_empty() {
            let vals: Vec<String> = c.initial.iter().map(|v| v.to_string()).collect();
            let _ = write!(out, " init [{}]", vals.join(", "));
        }
        let _ = writeln!(out, ";");
    }

    for d in &g.declarators {
        let _ = write!(out, "  state {}", d.name);
        if d.pins.iter().next().is_some() {
            let pins: Vec<String> = d.pins.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = write!(out, " {{ {} }}", pins.join(", "));
        }
        if d.name == g.initial {
            let _ = write!(out, " init");
            if g.initial_guard != Guard::True {
                let _ = write!(out, " when {}", render_guard(&g.initial_guard, 0));
            }
        }
        let _ = writeln!(out, ";");
    }

    for t in &g.transitions {
        let _ = write!(out, "  trans {} -> {}", t.src, t.dst);
        if t.guard != Guard::True {
            let _ = write!(out, " when {}", render_guard(&t.guard, 0));
        }
        let _ = writeln!(out, " on {};", render_action(&t.action));
    }

    for p in &g.propositions {
        let _ = writeln!(out, "  prop {} := {};", p.name, render_guard(&p.guard, 0));
    }

    for r in &g.label_rules {
        let _ = writeln!(
            out,
            "  label when {} => {};",
            render_guard(&r.guard, 0),
            r.prop
        );
    }

    if !g.terminals.is_empty() {
        let names: Vec<&str> = g.terminals.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "  terminal {};", names.join(", "));
    }

    if !g.parallel.is_empty() {
        let _ = writeln!(out, "  parallel {};", g.parallel.join(", "));
    }

    for e in &g.embeds {
        let _ = writeln!(out, "  embed {} at {};", e.inner, e.at);
    }

    out.push_str("}\n");
    out
}

pub fn render_kind(k: &ValueKind) -> String {
    match k {
        ValueKind::Bool => "bool".to_string(),
        ValueKind::Int { lo, hi } => format!("int[{lo}..{hi}]"),
        ValueKind::Sym { enumerants } => format!("sym[{}]", enumerants.join(", ")),
    }
}

pub fn render_action(a: &Action) -> String {
    match a {
        Action::Named(n) => n.clone(),
        Action::Send { chan, msg } => match msg {
            MsgExpr::Lit(v) => format!("{chan}!{v}"),
            MsgExpr::Var(x) => format!("{chan}!{x}"),
        },
        Action::Receive { chan, var } => format!("{chan}?{var}"),
    }
}

fn render_atom(a: &Atom) -> String {
    if a.op == sysgraph_core::CmpOp::Eq && a.rhs == Operand::Lit(TypedValue::Bool(true)) {
        return a.var.clone();
    }
    let op = if a.op == sysgraph_core::CmpOp::Eq {
        "==".to_string()
    } else {
        a.op.symbol().to_string()
    };
    let rhs = match &a.rhs {
        Operand::Lit(v) => v.to_string(),
        Operand::Var(x) => x.clone(),
    };
    format!("{} {op} {rhs}", a.var)
}

/// Precedence climbing: 0 = implies, 1 = or, 2 = and, 3 = unary.
pub fn render_guard(g: &Guard, prec: u8) -> String {
    let (text, my_prec) = match g {
        Guard::True => ("true".to_string(), 4),
        Guard::False => ("false".to_string(), 4),
        Guard::Atom(a) => (render_atom(a), 4),
        Guard::Not(inner) => (format!("!{}", render_guard(inner, 3)), 3),
        Guard::And(a, b) => (
            format!("{} && {}", render_guard(a, 2), render_guard(b, 2)),
            2,
        ),
        Guard::Or(a, b) => (
            format!("{} || {}", render_guard(a, 1), render_guard(b, 1)),
            1,
        ),
        Guard::Implies(a, b) => (
            format!("{} -> {}", render_guard(a, 1), render_guard(b, 0)),
            0,
        ),
    };
    if my_prec < prec {
        format!("({text})")
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::lex;
    use crate::parser::parse_tokens;
    use crate::resolve::resolve;

    fn graph(text: &str) -> SystemGraph {
        let unit = parse_tokens(lex(text).unwrap()).unwrap();
        let (g, _, d) = resolve(&unit);
        assert!(d.is_empty(), "{d:?}");
        g
    }

    #[test]
    fn output_reparses_to_the_same_graph() {
        let g = graph(
            "system t { vars { status: int[0..4] = 0; paid: bool = false; } chan c: int[0..4] cap 1 init [3]; state a { status = 1 } init when status == 0; state b; trans a -> b when status < 2 && !paid on c?status; trans b -> a on c!status; prop P := status == 1 -> paid; label when paid => P; terminal b; }",
        );
        let printed = pretty(&g);
        let g2 = graph(&printed);
        assert_eq!(g, g2);
        assert_eq!(pretty(&g2), printed);
    }

    #[test]
    fn bare_bool_sugar_survives() {
        let g = graph("system t { vars { p: bool; } state a init; prop P := p; }");
        assert!(pretty(&g).contains("prop P := p;"));
    }

    #[test]
    fn parentheses_only_where_needed() {
        let g = graph(
            "system t { vars { a: bool; b: bool; c: bool; } state s init; prop P := (a || b) && c; prop Q := a || b && c; }",
        );
        let text = pretty(&g);
        assert!(text.contains("prop P := (a || b) && c;"));
        assert!(text.contains("prop Q := a || b && c;"));
    }

    #[test]
    fn guard_free_transition_prints_without_when() {
        let g = graph("system t { state a init; trans a -> a on tick; }");
        assert!(pretty(&g).contains("trans a -> a on tick;"));
    }
}
