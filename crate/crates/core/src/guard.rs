//! Guards: boolean conditions over evaluations.
//!
//! Guards are built from comparison atoms with the usual connectives. They
//! evaluate against an evaluation, convert to conjunctive normal form, and
//! report the atoms and variables they mention.

use crate::error::CoreError;
use crate::eval::{Evaluation, SignatureSet};
use crate::value::TypedValue;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Comparison operators. Order comparisons apply to integers only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_order(self) -> bool {
        matches!(self, CmpOp::Lt | CmpOp::Le | CmpOp::Gt | CmpOp::Ge)
    }

    pub fn negated(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
        }
    }
}

/// Right-hand side of a comparison: a literal value or another variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Operand {
    Lit(TypedValue),
    Var(String),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Lit(v) => write!(f, "{v}"),
            Operand::Var(x) => write!(f, "{x}"),
        }
    }
}

/// An atomic comparison `var op rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub var: String,
    pub op: CmpOp,
    pub rhs: Operand,
}

impl Atom {
    pub fn new<S: Into<String>>(var: S, op: CmpOp, rhs: Operand) -> Self {
        Atom {
            var: var.into(),
            op,
            rhs,
        }
    }

    pub fn eq_lit<S: Into<String>>(var: S, value: TypedValue) -> Self {
        Atom::new(var, CmpOp::Eq, Operand::Lit(value))
    }

    pub fn sat(&self, v: &Evaluation) -> Result<bool, CoreError> {
        let lhs = v
            .get(&self.var)
            .ok_or_else(|| CoreError::UnknownVariable(self.var.clone()))?;
        let rhs = match &self.rhs {
            Operand::Lit(value) => value.clone(),
            Operand::Var(x) => v
                .get(x)
                .ok_or_else(|| CoreError::UnknownVariable(x.clone()))?
                .clone(),
        };
        match (lhs, &rhs, self.op) {
            (TypedValue::Int(a), TypedValue::Int(b), op) => Ok(match op {
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
            }),
            (TypedValue::Bool(a), TypedValue::Bool(b), CmpOp::Eq) => Ok(a == b),
            (TypedValue::Bool(a), TypedValue::Bool(b), CmpOp::Ne) => Ok(a != b),
            (TypedValue::Sym(a), TypedValue::Sym(b), CmpOp::Eq) => Ok(a == b),
            (TypedValue::Sym(a), TypedValue::Sym(b), CmpOp::Ne) => Ok(a != b),
            (lhs, rhs, op) => Err(CoreError::BadComparison {
                op: op.symbol().to_string(),
                kind: format!("{} vs {}", lhs.class_name(), rhs.class_name()),
            }),
        }
    }

    /// Variables this atom reads.
    pub fn reads(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        out.insert(self.var.clone());
        if let Operand::Var(x) = &self.rhs {
            out.insert(x.clone());
        }
        out
    }

    pub fn check(&self, sigs: &SignatureSet) -> Result<(), CoreError> {
        let lhs = sigs
            .get(&self.var)
            .ok_or_else(|| CoreError::UnknownVariable(self.var.clone()))?;
        let rhs_class = match &self.rhs {
            Operand::Lit(v) => {
                if let (TypedValue::Sym(s), crate::value::ValueKind::Sym { enumerants }) =
                    (v, &lhs.kind)
                {
                    if !enumerants.contains(s) {
                        return Err(CoreError::UnknownEnumerant {
                            var: self.var.clone(),
                            value: s.clone(),
                        });
                    }
                }
                v.class_name()
            }
            Operand::Var(x) => {
                let rhs = sigs
                    .get(x)
                    .ok_or_else(|| CoreError::UnknownVariable(x.clone()))?;
                rhs.kind.class_name()
            }
        };
        if lhs.kind.class_name() != rhs_class {
            return Err(CoreError::BadComparison {
                op: self.op.symbol().to_string(),
                kind: format!("{} vs {}", lhs.kind.class_name(), rhs_class),
            });
        }
        if self.op.is_order() && lhs.kind.class_name() != "int" {
            return Err(CoreError::BadComparison {
                op: self.op.symbol().to_string(),
                kind: lhs.kind.class_name().to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.var, self.op.symbol(), self.rhs)
    }
}

/// A boolean condition over an evaluation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Guard {
    True,
    False,
    Atom(Atom),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
    Implies(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn atom(a: Atom) -> Guard {
        Guard::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(g: Guard) -> Guard {
        Guard::Not(Box::new(g))
    }

    pub fn and(a: Guard, b: Guard) -> Guard {
        Guard::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Guard, b: Guard) -> Guard {
        Guard::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Guard, b: Guard) -> Guard {
        Guard::Implies(Box::new(a), Box::new(b))
    }

    /// Conjunction of many guards; empty input yields `true`.
    pub fn conjoin<I: IntoIterator<Item = Guard>>(parts: I) -> Guard {
        let mut it = parts.into_iter();
        match it.next() {
            None => Guard::True,
            Some(first) => it.fold(first, Guard::and),
        }
    }

    /// Satisfaction under an evaluation.
    pub fn sat(&self, v: &Evaluation) -> Result<bool, CoreError> {
        Ok(match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Atom(a) => a.sat(v)?,
            Guard::Not(g) => !g.sat(v)?,
            Guard::And(a, b) => a.sat(v)? && b.sat(v)?,
            Guard::Or(a, b) => a.sat(v)? || b.sat(v)?,
            Guard::Implies(a, b) => !a.sat(v)? || b.sat(v)?,
        })
    }

    /// The set of comparison atoms mentioned anywhere in the guard,
    /// regardless of polarity.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Guard::True | Guard::False => {}
            Guard::Atom(a) => {
                out.insert(a.clone());
            }
            Guard::Not(g) => g.collect_atoms(out),
            Guard::And(a, b) | Guard::Or(a, b) | Guard::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Variables the guard reads.
    pub fn reads(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            out.extend(a.reads());
        }
        out
    }

    /// Kind checking against a signature set.
    pub fn check(&self, sigs: &SignatureSet) -> Result<(), CoreError> {
        match self {
            Guard::True | Guard::False => Ok(()),
            Guard::Atom(a) => a.check(sigs),
            Guard::Not(g) => g.check(sigs),
            Guard::And(a, b) | Guard::Or(a, b) | Guard::Implies(a, b) => {
                a.check(sigs)?;
                b.check(sigs)
            }
        }
    }

    /// Negation normal form: implications rewritten, negations pushed onto
    /// atoms (kept as negative literals via `Not`).
    pub fn nnf(&self) -> Guard {
        match self {
            Guard::True | Guard::False | Guard::Atom(_) => self.clone(),
            Guard::And(a, b) => Guard::and(a.nnf(), b.nnf()),
            Guard::Or(a, b) => Guard::or(a.nnf(), b.nnf()),
            Guard::Implies(a, b) => Guard::or(Guard::not(a.as_ref().clone()).nnf(), b.nnf()),
            Guard::Not(inner) => match inner.as_ref() {
                Guard::True => Guard::False,
                Guard::False => Guard::True,
                Guard::Atom(a) => Guard::not(Guard::Atom(a.clone())),
                Guard::Not(g) => g.nnf(),
                Guard::And(a, b) => Guard::or(
                    Guard::not(a.as_ref().clone()).nnf(),
                    Guard::not(b.as_ref().clone()).nnf(),
                ),
                Guard::Or(a, b) => Guard::and(
                    Guard::not(a.as_ref().clone()).nnf(),
                    Guard::not(b.as_ref().clone()).nnf(),
                ),
                Guard::Implies(a, b) => Guard::and(a.nnf(), Guard::not(b.as_ref().clone()).nnf()),
            },
        }
    }

    /// Conjunctive normal form by distribution.
    pub fn cnf(&self) -> Cnf {
        fn go(g: &Guard) -> Vec<BTreeSet<Literal>> {
            match g {
                Guard::True => vec![],
                Guard::False => vec![BTreeSet::new()],
                Guard::Atom(a) => vec![BTreeSet::from([Literal {
                    positive: true,
                    atom: a.clone(),
                }])],
                Guard::Not(inner) => match inner.as_ref() {
                    Guard::Atom(a) => vec![BTreeSet::from([Literal {
                        positive: false,
                        atom: a.clone(),
                    }])],
                    other => unreachable!("nnf left a negated non-atom: {other:?}"),
                },
                Guard::And(a, b) => {
                    let mut clauses = go(a);
                    clauses.extend(go(b));
                    clauses
                }
                Guard::Or(a, b) => {
                    let left = go(a);
                    let right = go(b);
                    if left.is_empty() || right.is_empty() {
                        return vec![];
                    }
                    let mut clauses = Vec::with_capacity(left.len() * right.len());
                    for l in &left {
                        for r in &right {
                            clauses.push(l.union(r).cloned().collect());
                        }
                    }
                    clauses
                }
                Guard::Implies(..) => unreachable!("nnf left an implication"),
            }
        }
        let mut clauses = go(&self.nnf());
        clauses.sort();
        clauses.dedup();
        Cnf { clauses }
    }

    fn precedence(&self) -> u8 {
        match self {
            Guard::Implies(..) => 1,
            Guard::Or(..) => 2,
            Guard::And(..) => 3,
            Guard::Not(..) => 4,
            Guard::True | Guard::False | Guard::Atom(_) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Guard::True => write!(f, "true")?,
            Guard::False => write!(f, "false")?,
            Guard::Atom(a) => match (&a.op, &a.rhs) {
                (CmpOp::Eq, Operand::Lit(TypedValue::Bool(true))) => write!(f, "{}", a.var)?,
                _ => write!(f, "{a}")?,
            },
            Guard::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, 4)?;
            }
            Guard::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 4)?;
            }
            Guard::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 3)?;
            }
            Guard::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A possibly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn sat(&self, v: &Evaluation) -> Result<bool, CoreError> {
        Ok(self.atom.sat(v)? == self.positive)
    }
}

/// Conjunctive normal form: a conjunction of clauses, each a disjunction of
/// literals. No clauses means `true`; an empty clause means `false`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    pub clauses: Vec<BTreeSet<Literal>>,
}

impl Cnf {
    pub fn sat(&self, v: &Evaluation) -> Result<bool, CoreError> {
        for clause in &self.clauses {
            let mut any = false;
            for lit in clause {
                if lit.sat(v)? {
                    any = true;
                    break;
                }
            }
            if !any {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_guard(&self) -> Guard {
        if self.clauses.is_empty() {
            return Guard::True;
        }
        let clause_guards = self.clauses.iter().map(|clause| {
            if clause.is_empty() {
                return Guard::False;
            }
            clause
                .iter()
                .map(|lit| {
                    let g = Guard::Atom(lit.atom.clone());
                    if lit.positive {
                        g
                    } else {
                        Guard::not(g)
                    }
                })
                .reduce(Guard::or)
                .unwrap()
        });
        clause_guards.reduce(Guard::and).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::VarSignature;
    use crate::value::ValueKind;

    fn sigs() -> SignatureSet {
        SignatureSet::new(vec![
            VarSignature::new("status", ValueKind::int(0, 4)),
            VarSignature::new("paid", ValueKind::Bool),
        ])
        .unwrap()
    }

    fn ev(status: i64, paid: bool) -> Evaluation {
        Evaluation::from_pairs([
            ("status", TypedValue::Int(status)),
            ("paid", TypedValue::Bool(paid)),
        ])
    }

    fn status_eq(n: i64) -> Guard {
        Guard::Atom(Atom::eq_lit("status", TypedValue::Int(n)))
    }

    fn paid_is(b: bool) -> Guard {
        Guard::Atom(Atom::eq_lit("paid", TypedValue::Bool(b)))
    }

    #[test]
    fn atom_satisfaction() {
        let v = Evaluation::from_pairs([("status", TypedValue::Int(1))]);
        assert!(status_eq(1).sat(&v).unwrap());
        assert!(!status_eq(2).sat(&v).unwrap());
    }

    #[test]
    fn true_is_a_tautology() {
        assert!(Guard::True.sat(&Evaluation::empty()).unwrap());
        assert!(Guard::True.sat(&ev(3, true)).unwrap());
    }

    #[test]
    fn disjunction_false_when_both_sides_fail() {
        let g = Guard::or(
            Guard::Atom(Atom::new(
                "status",
                CmpOp::Lt,
                Operand::Lit(TypedValue::Int(2)),
            )),
            Guard::not(paid_is(true)),
        );
        assert!(!g.sat(&ev(2, true)).unwrap());
        assert!(g.sat(&ev(1, true)).unwrap());
        assert!(g.sat(&ev(2, false)).unwrap());
    }

    #[test]
    fn sat_reports_unknown_variables() {
        let err = status_eq(1).sat(&Evaluation::empty()).unwrap_err();
        assert!(matches!(err, CoreError::UnknownVariable(v) if v == "status"));
    }

    #[test]
    fn atoms_of_single_atom() {
        let expected: BTreeSet<_> = [Atom::eq_lit("status", TypedValue::Int(1))].into();
        assert_eq!(status_eq(1).atoms(), expected);
    }

    #[test]
    fn atoms_split_conjunctions() {
        let g = Guard::and(status_eq(1), paid_is(true));
        let expected: BTreeSet<_> = [
            Atom::eq_lit("status", TypedValue::Int(1)),
            Atom::eq_lit("paid", TypedValue::Bool(true)),
        ]
        .into();
        assert_eq!(g.atoms(), expected);
    }

    #[test]
    fn atoms_ignore_polarity() {
        let g = Guard::not(Guard::or(status_eq(1), paid_is(true)));
        let expected: BTreeSet<_> = [
            Atom::eq_lit("status", TypedValue::Int(1)),
            Atom::eq_lit("paid", TypedValue::Bool(true)),
        ]
        .into();
        assert_eq!(g.atoms(), expected);
    }

    #[test]
    fn cnf_preserves_satisfaction_exhaustively() {
        let sigs = sigs();
        let guards = vec![
            Guard::True,
            Guard::False,
            status_eq(1),
            Guard::not(status_eq(1)),
            Guard::and(status_eq(1), paid_is(true)),
            Guard::or(
                Guard::Atom(Atom::new(
                    "status",
                    CmpOp::Lt,
                    Operand::Lit(TypedValue::Int(2)),
                )),
                Guard::not(paid_is(true)),
            ),
            Guard::implies(paid_is(true), status_eq(4)),
            Guard::not(Guard::implies(
                Guard::or(status_eq(0), status_eq(2)),
                Guard::and(paid_is(false), Guard::not(status_eq(2))),
            )),
            Guard::implies(
                Guard::implies(status_eq(0), paid_is(true)),
                Guard::or(Guard::not(paid_is(false)), status_eq(3)),
            ),
        ];
        let all = sigs.enumerate();
        assert!(all.len() <= 1024);
        for g in guards {
            let cnf = g.cnf();
            let round = cnf.to_guard();
            for v in &all {
                let direct = g.sat(v).unwrap();
                assert_eq!(cnf.sat(v).unwrap(), direct, "cnf of {g} at {v}");
                assert_eq!(round.sat(v).unwrap(), direct, "round trip of {g} at {v}");
            }
        }
    }

    #[test]
    fn cnf_degenerate_forms() {
        assert!(Guard::True.cnf().clauses.is_empty());
        let f = Guard::False.cnf();
        assert_eq!(f.clauses.len(), 1);
        assert!(f.clauses[0].is_empty());
    }

    #[test]
    fn check_enforces_kinds() {
        let sigs = sigs();
        assert!(status_eq(1).check(&sigs).is_ok());
        assert!(Guard::Atom(Atom::new(
            "status",
            CmpOp::Lt,
            Operand::Lit(TypedValue::Int(5)),
        ))
        .check(&sigs)
        .is_ok());
        let err = Guard::Atom(Atom::new(
            "paid",
            CmpOp::Lt,
            Operand::Lit(TypedValue::Bool(true)),
        ))
        .check(&sigs)
        .unwrap_err();
        assert!(matches!(err, CoreError::BadComparison { .. }));
        let err = Guard::Atom(Atom::eq_lit("status", TypedValue::Bool(true)))
            .check(&sigs)
            .unwrap_err();
        assert!(matches!(err, CoreError::BadComparison { .. }));
        let err = status_eq(1).check(&SignatureSet::default()).unwrap_err();
        assert!(matches!(err, CoreError::UnknownVariable(_)));
    }

    #[test]
    fn check_requires_known_enumerants() {
        let sigs = SignatureSet::new(vec![VarSignature::new(
            "mode",
            ValueKind::sym(vec!["idle", "busy"]),
        )])
        .unwrap();
        assert!(
            Guard::Atom(Atom::eq_lit("mode", TypedValue::Sym("busy".into())))
                .check(&sigs)
                .is_ok()
        );
        let err = Guard::Atom(Atom::eq_lit("mode", TypedValue::Sym("gone".into())))
            .check(&sigs)
            .unwrap_err();
        assert!(matches!(err, CoreError::UnknownEnumerant { .. }));
    }

    #[test]
    fn rendering_respects_precedence() {
        let g = Guard::or(
            Guard::and(status_eq(1), Guard::not(paid_is(true))),
            status_eq(2),
        );
        assert_eq!(g.to_string(), "status=1 & !paid | status=2");
        let g = Guard::and(Guard::or(status_eq(1), status_eq(2)), paid_is(true));
        assert_eq!(g.to_string(), "(status=1 | status=2) & paid");
        let g = Guard::implies(paid_is(true), Guard::or(status_eq(1), status_eq(2)));
        assert_eq!(g.to_string(), "paid -> status=1 | status=2");
        assert_eq!(paid_is(false).to_string(), "paid=false");
    }

    #[test]
    fn reads_collects_all_variables() {
        let g = Guard::and(
            status_eq(1),
            Guard::Atom(Atom::new("paid", CmpOp::Eq, Operand::Var("other".into()))),
        );
        let expected: BTreeSet<String> = ["status", "paid", "other"].map(String::from).into();
        assert_eq!(g.reads(), expected);
    }
}
