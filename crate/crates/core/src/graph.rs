//! The system-graph model: declarators, transitions, channels, propositions,
//! and labeling.
//!
//! A graph here is pure data produced by the language frontend (or rebuilt
//! from a skeleton bundle). Semantic lowering lives in the semantics crate.

use crate::action::Action;
use crate::error::CoreError;
use crate::eval::{Evaluation, SignatureSet};
use crate::guard::{Atom, Guard};
use crate::value::{TypedValue, ValueKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A state declarator: a named point of control with a partial evaluation
/// pinning some variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDeclarator {
    pub name: String,
    pub pins: Evaluation,
}

impl StateDeclarator {
    pub fn new<S: Into<String>>(name: S, pins: Evaluation) -> Self {
        StateDeclarator {
            name: name.into(),
            pins,
        }
    }
}

/// A declared transition between declarators, with guard and action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDecl {
    pub src: String,
    pub dst: String,
    pub guard: Guard,
    pub action: Action,
}

/// A bounded FIFO channel. Capacity zero means synchronous handshake.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelDecl {
    pub name: String,
    pub domain: ValueKind,
    pub cap: usize,
    pub initial: Vec<TypedValue>,
}

/// A named proposition defined by a guard over the state variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition {
    pub name: String,
    pub guard: Guard,
}

/// An explicit labeling rule: the named proposition may only label states
/// satisfying this guard (restriction on top of the proposition's formula).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRule {
    pub guard: Guard,
    pub prop: String,
}

/// A reference to another graph to be embedded at a declarator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedDecl {
    pub inner: String,
    pub at: String,
}

/// A complete system graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemGraph {
    pub name: String,
    /// Modules are incomplete fragments meant for embedding; they skip the
    /// initial-declarator requirement and embed by plain union.
    pub is_module: bool,
    pub signatures: SignatureSet,
    pub channels: Vec<ChannelDecl>,
    pub declarators: Vec<StateDeclarator>,
    /// Name of the initial declarator; empty for modules and composites.
    pub initial: String,
    /// Condition the initial evaluation must satisfy.
    pub initial_guard: Guard,
    pub terminals: BTreeSet<String>,
    pub transitions: Vec<TransitionDecl>,
    pub propositions: Vec<Proposition>,
    pub label_rules: Vec<LabelRule>,
    /// Names of component graphs to compose in parallel (composite shells).
    pub parallel: Vec<String>,
    /// Graphs to embed at declarators (resolved by the version toolchain).
    pub embeds: Vec<EmbedDecl>,
}

impl SystemGraph {
    /// A bare graph with the given name; callers fill in the rest.
    pub fn empty<S: Into<String>>(name: S) -> Self {
        SystemGraph {
            name: name.into(),
            is_module: false,
            signatures: SignatureSet::default(),
            channels: Vec::new(),
            declarators: Vec::new(),
            initial: String::new(),
            initial_guard: Guard::True,
            terminals: BTreeSet::new(),
            transitions: Vec::new(),
            propositions: Vec::new(),
            label_rules: Vec::new(),
            parallel: Vec::new(),
            embeds: Vec::new(),
        }
    }

    pub fn is_composite(&self) -> bool {
        !self.parallel.is_empty()
    }

    pub fn declarator(&self, name: &str) -> Option<&StateDeclarator> {
        self.declarators.iter().find(|d| d.name == name)
    }

    pub fn channel(&self, name: &str) -> Option<&ChannelDecl> {
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn proposition(&self, name: &str) -> Option<&Proposition> {
        self.propositions.iter().find(|p| p.name == name)
    }

    pub fn initial_declarator(&self) -> Option<&StateDeclarator> {
        self.declarator(&self.initial)
    }

    pub fn is_terminal(&self, decl: &str) -> bool {
        self.terminals.contains(decl)
    }

    pub fn outgoing<'a>(&'a self, decl: &'a str) -> impl Iterator<Item = &'a TransitionDecl> {
        self.transitions.iter().filter(move |t| t.src == decl)
    }

    /// The effective labeling guard of a proposition: its own formula,
    /// further restricted by any explicit label rules naming it.
    pub fn effective_prop_guard(&self, prop: &str) -> Option<Guard> {
        let p = self.proposition(prop)?;
        let restrictions: Vec<Guard> = self
            .label_rules
            .iter()
            .filter(|r| r.prop == prop)
            .map(|r| r.guard.clone())
            .collect();
        if restrictions.is_empty() {
            return Some(p.guard.clone());
        }
        let any = restrictions
            .into_iter()
            .reduce(Guard::or)
            .expect("nonempty restrictions");
        Some(Guard::and(p.guard.clone(), any))
    }

    /// The propositions holding at an evaluation.
    pub fn label_state(&self, v: &Evaluation) -> Result<BTreeSet<String>, CoreError> {
        let mut out = BTreeSet::new();
        for p in &self.propositions {
            let g = self
                .effective_prop_guard(&p.name)
                .expect("proposition exists");
            if g.sat(v)? {
                out.insert(p.name.clone());
            }
        }
        Ok(out)
    }

    /// Every comparison atom mentioned by any proposition.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for p in &self.propositions {
            out.extend(p.guard.atoms());
        }
        out
    }

    /// Names of all declared propositions, in declaration order.
    pub fn proposition_names(&self) -> Vec<String> {
        self.propositions.iter().map(|p| p.name.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::VarSignature;
    use crate::guard::{CmpOp, Operand};

    fn demo_graph() -> SystemGraph {
        let mut g = SystemGraph::empty("demo");
        g.signatures = SignatureSet::new(vec![
            VarSignature::new("status", ValueKind::int(0, 4)),
            VarSignature::new("paid", ValueKind::Bool),
        ])
        .unwrap();
        g.declarators = vec![
            StateDeclarator::new(
                "init",
                Evaluation::from_pairs([
                    ("status", TypedValue::Int(0)),
                    ("paid", TypedValue::Bool(false)),
                ]),
            ),
            StateDeclarator::new(
                "done",
                Evaluation::from_pairs([("status", TypedValue::Int(4))]),
            ),
        ];
        g.initial = "init".into();
        g.terminals.insert("done".into());
        g.transitions = vec![TransitionDecl {
            src: "init".into(),
            dst: "done".into(),
            guard: Guard::True,
            action: Action::named("finish"),
        }];
        g.propositions = vec![
            Proposition {
                name: "PaidGas".into(),
                guard: Guard::Atom(Atom::eq_lit("status", TypedValue::Int(1))),
            },
            Proposition {
                name: "Notified".into(),
                guard: Guard::Atom(Atom::eq_lit("status", TypedValue::Int(4))),
            },
        ];
        g
    }

    fn ev(pairs: &[(&str, TypedValue)]) -> Evaluation {
        Evaluation::from_pairs(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())))
    }

    #[test]
    fn labeling_picks_satisfied_propositions() {
        let g = demo_graph();
        let labels = g
            .label_state(&ev(&[
                ("status", TypedValue::Int(1)),
                ("paid", TypedValue::Bool(true)),
            ]))
            .unwrap();
        assert_eq!(labels, BTreeSet::from(["PaidGas".to_string()]));

        let labels = g
            .label_state(&ev(&[("status", TypedValue::Int(4))]))
            .unwrap();
        assert_eq!(labels, BTreeSet::from(["Notified".to_string()]));

        let labels = g
            .label_state(&ev(&[("status", TypedValue::Int(0))]))
            .unwrap();
        assert!(labels.is_empty());
    }

    #[test]
    fn label_rules_restrict_but_never_extend() {
        let mut g = demo_graph();
        g.label_rules.push(LabelRule {
            guard: Guard::Atom(Atom::eq_lit("paid", TypedValue::Bool(true))),
            prop: "PaidGas".into(),
        });
        let with_paid = ev(&[
            ("status", TypedValue::Int(1)),
            ("paid", TypedValue::Bool(true)),
        ]);
        let without_paid = ev(&[
            ("status", TypedValue::Int(1)),
            ("paid", TypedValue::Bool(false)),
        ]);
        assert_eq!(
            g.label_state(&with_paid).unwrap(),
            BTreeSet::from(["PaidGas".to_string()])
        );
        assert!(g.label_state(&without_paid).unwrap().is_empty());
        let off_formula = ev(&[
            ("status", TypedValue::Int(2)),
            ("paid", TypedValue::Bool(true)),
        ]);
        assert!(g.label_state(&off_formula).unwrap().is_empty());
    }

    #[test]
    fn atoms_union_over_propositions() {
        let mut g = demo_graph();
        g.propositions.push(Proposition {
            name: "Low".into(),
            guard: Guard::Atom(crate::guard::Atom::new(
                "status",
                CmpOp::Lt,
                Operand::Lit(TypedValue::Int(2)),
            )),
        });
        let atoms = g.atoms();
        assert_eq!(atoms.len(), 3);
        assert!(atoms.contains(&Atom::eq_lit("status", TypedValue::Int(1))));
    }

    #[test]
    fn accessors() {
        let g = demo_graph();
        assert!(g.declarator("init").is_some());
        assert!(g.declarator("nope").is_none());
        assert_eq!(g.initial_declarator().unwrap().name, "init");
        assert!(g.is_terminal("done"));
        assert!(!g.is_terminal("init"));
        assert_eq!(g.outgoing("init").count(), 1);
        assert_eq!(g.outgoing("done").count(), 0);
        assert!(!g.is_composite());
    }
}
