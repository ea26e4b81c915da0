//! State inference: the initial evaluation of a graph and the evaluation a
//! transition's target imposes.

use crate::error::ElabError;
use sysgraph_core::{eval_override, Evaluation, SystemGraph, TransitionDecl};

/// The evaluation a system starts in: every variable at its declared (or
/// domain) default, overridden by the pins of the initial declarator. Fails
/// when the graph has no initial declarator or the result violates the
/// initial constraint.
pub fn initial_state(g: &SystemGraph) -> Result<Evaluation, ElabError> {
    if g.initial.is_empty() {
        return Err(ElabError::NoInitialState(g.name.clone()));
    }
    let decl = g
        .declarator(&g.initial)
        .ok_or_else(|| ElabError::UnknownState {
            system: g.name.clone(),
            state: g.initial.clone(),
        })?;
    let v = eval_override(&g.signatures.default_evaluation(), &decl.pins);
    if !g.initial_guard.sat(&v)? {
        return Err(ElabError::InitialGuardViolated {
            system: g.name.clone(),
            eval: v.to_string(),
        });
    }
    Ok(v)
}

/// The evaluation after taking `t` from `current`: the target's pins replace
/// the corresponding variables, everything else persists. Receive bindings
/// are the caller's job (apply them to `current` first).
pub fn infer_successor(
    g: &SystemGraph,
    current: &Evaluation,
    t: &TransitionDecl,
) -> Result<Evaluation, ElabError> {
    let dst = g
        .declarator(&t.dst)
        .ok_or_else(|| ElabError::UnknownState {
            system: g.name.clone(),
            state: t.dst.clone(),
        })?;
    Ok(eval_override(current, &dst.pins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sysgraph_core::{
        Atom, Evaluation, Guard, Operand, SignatureSet, StateDeclarator, SystemGraph, TypedValue,
        ValueKind, VarSignature,
    };

    fn tiny() -> SystemGraph {
        let mut g = SystemGraph::empty("tiny");
        g.signatures = SignatureSet::new(vec![
            VarSignature::with_default("status", ValueKind::int(0, 4), TypedValue::Int(0)),
            VarSignature::with_default("paid", ValueKind::Bool, TypedValue::Bool(false)),
            VarSignature::with_default("tx", ValueKind::int(0, 9), TypedValue::Int(0)),
        ])
        .unwrap();
        g.declarators.push(StateDeclarator::new(
            "init",
            Evaluation::from_pairs([
                ("status", TypedValue::Int(0)),
                ("paid", TypedValue::Bool(false)),
            ]),
        ));
        g.declarators.push(StateDeclarator::new(
            "paidGas",
            Evaluation::from_pairs([
                ("status", TypedValue::Int(1)),
                ("paid", TypedValue::Bool(true)),
            ]),
        ));
        g.initial = "init".into();
        g
    }

    #[test]
    fn initial_is_defaults_plus_pins() {
        let v = initial_state(&tiny()).unwrap();
        assert_eq!(v.to_string(), "{paid:false,status:0,tx:0}");
    }

    #[test]
    fn violated_initial_constraint_is_an_error() {
        let mut g = tiny();
        g.initial_guard = Guard::Atom(Atom::new(
            "status",
            sysgraph_core::CmpOp::Eq,
            Operand::Lit(TypedValue::Int(3)),
        ));
        assert!(matches!(
            initial_state(&g),
            Err(ElabError::InitialGuardViolated { .. })
        ));
    }

    #[test]
    fn missing_initial_declarator_is_an_error() {
        let mut g = tiny();
        g.initial = String::new();
        assert!(matches!(
            initial_state(&g),
            Err(ElabError::NoInitialState(_))
        ));
        let mut g = tiny();
        g.initial = "nowhere".into();
        assert!(matches!(
            initial_state(&g),
            Err(ElabError::UnknownState { .. })
        ));
    }

    #[test]
    fn successor_keeps_unpinned_variables() {
        let g = tiny();
        let v = initial_state(&g).unwrap();
        let t = sysgraph_core::TransitionDecl {
            src: "init".into(),
            dst: "paidGas".into(),
            guard: Guard::True,
            action: sysgraph_core::Action::named("payGas"),
        };
        let v2 = infer_successor(&g, &v, &t).unwrap();
        assert_eq!(v2.to_string(), "{paid:true,status:1,tx:0}");
    }
}
