//! Temporal property language: one AST covering linear-time formulas and
//! quantified branching-time formulas, with a hand-rolled parser.
//!
//! Concrete syntax: `!`, `&`, `|`, `->` for the boolean connectives, `X`
//! (next), `F` (eventually), `G` (always), binary `U` (until), and the path
//! quantifiers `A`/`E` followed by `X`/`F`/`G` or a bracketed `[f U g]`.
//! Operator words are reserved; any other identifier is a proposition name.

use crate::error::VerifyError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// CTL: over all paths from here.
    Forall(Box<Formula>),
    /// CTL: over some path from here.
    Exists(Box<Formula>),
}

/// Which logic a well-formed formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    Ltl,
    Ctl,
}

impl Formula {
    pub fn atom<S: Into<String>>(name: S) -> Formula {
        Formula::Atom(name.into())
    }
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }
    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }
    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }
    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }
    pub fn forall(f: Formula) -> Formula {
        Formula::Forall(Box::new(f))
    }
    pub fn exists(f: Formula) -> Formula {
        Formula::Exists(Box::new(f))
    }

    /// Every proposition name the formula mentions.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Finally(f)
            | Formula::Globally(f)
            | Formula::Forall(f)
            | Formula::Exists(f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Classify as LTL (no quantifiers) or well-formed CTL (every temporal
    /// operator directly under a quantifier). Anything else is mixed.
    pub fn logic(&self) -> Result<Logic, VerifyError> {
        if !self.has_quantifier() {
            return Ok(Logic::Ltl);
        }
        self.check_ctl_state()?;
        Ok(Logic::Ctl)
    }

    fn has_quantifier(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => false,
            Formula::Forall(_) | Formula::Exists(_) => true,
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Finally(f)
            | Formula::Globally(f) => f.has_quantifier(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => a.has_quantifier() || b.has_quantifier(),
        }
    }

    fn check_ctl_state(&self) -> Result<(), VerifyError> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => Ok(()),
            Formula::Not(f) => f.check_ctl_state(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check_ctl_state()?;
                b.check_ctl_state()
            }
            Formula::Forall(path) | Formula::Exists(path) => match path.as_ref() {
                Formula::Next(f) | Formula::Finally(f) | Formula::Globally(f) => {
                    f.check_ctl_state()
                }
                Formula::Until(a, b) => {
                    a.check_ctl_state()?;
                    b.check_ctl_state()
                }
                _ => Err(VerifyError::MixedLogic),
            },
            Formula::Next(_) | Formula::Finally(_) | Formula::Globally(_) | Formula::Until(..) => {
                Err(VerifyError::MixedLogic)
            }
        }
    }

    /// Rewrite to the core linear-time grammar: `true`/`false`/atoms,
    /// negation, conjunction, disjunction, next, and until. Quantifiers are
    /// left untouched; callers reject them beforehand.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.clone()),
            Formula::Not(f) => Formula::not(f.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::Implies(a, b) => Formula::or(Formula::not(a.desugar()), b.desugar()),
            Formula::Next(f) => Formula::next(f.desugar()),
            Formula::Finally(f) => Formula::until(Formula::True, f.desugar()),
            Formula::Globally(f) => Formula::not(Formula::until(
                Formula::True,
                Formula::not(f.desugar()),
            )),
            Formula::Until(a, b) => Formula::until(a.desugar(), b.desugar()),
            Formula::Forall(f) => Formula::forall(f.desugar()),
            Formula::Exists(f) => Formula::exists(f.desugar()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}

/// Precedence levels: 0 implication, 1 disjunction, 2 conjunction, 3 until,
/// 4 unary.
fn write_prec(formula: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match formula {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(..) => 3,
        _ => 4,
    };
    if prec < min {
        f.write_str("(")?;
        write_prec(formula, 0, f)?;
        return f.write_str(")");
    }
    match formula {
        Formula::True => f.write_str("true"),
        Formula::False => f.write_str("false"),
        Formula::Atom(a) => f.write_str(a),
        Formula::Not(inner) => {
            f.write_str("!")?;
            write_prec(inner, 4, f)
        }
        Formula::Next(inner) => {
            f.write_str("X ")?;
            write_prec(inner, 4, f)
        }
        Formula::Finally(inner) => {
            f.write_str("F ")?;
            write_prec(inner, 4, f)
        }
        Formula::Globally(inner) => {
            f.write_str("G ")?;
            write_prec(inner, 4, f)
        }
        Formula::Forall(path) | Formula::Exists(path) => {
            let q = if matches!(formula, Formula::Forall(_)) {
                "A"
            } else {
                "E"
            };
            match path.as_ref() {
                Formula::Until(a, b) => {
                    write!(f, "{q}[")?;
                    write_prec(a, 4, f)?;
                    f.write_str(" U ")?;
                    write_prec(b, 4, f)?;
                    f.write_str("]")
                }
                other => {
                    f.write_str(q)?;
                    write_prec(other, 4, f)
                }
            }
        }
        Formula::And(a, b) => {
            write_prec(a, 3, f)?;
            f.write_str(" & ")?;
            write_prec(b, 3, f)
        }
        Formula::Or(a, b) => {
            write_prec(a, 2, f)?;
            f.write_str(" | ")?;
            write_prec(b, 2, f)
        }
        Formula::Implies(a, b) => {
            write_prec(a, 1, f)?;
            f.write_str(" -> ")?;
            write_prec(b, 0, f)
        }
        Formula::Until(a, b) => {
            write_prec(a, 4, f)?;
            f.write_str(" U ")?;
            write_prec(b, 3, f)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bang,
    Amp,
    Pipe,
    Arrow,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, VerifyError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '[' => {
                out.push((col, Tok::LBracket));
                i += 1;
            }
            ']' => {
                out.push((col, Tok::RBracket));
                i += 1;
            }
            '!' => {
                out.push((col, Tok::Bang));
                i += 1;
            }
            '&' => {
                out.push((col, Tok::Amp));
                i += if bytes.get(i + 1) == Some(&b'&') { 2 } else { 1 };
            }
            '|' => {
                out.push((col, Tok::Pipe));
                i += if bytes.get(i + 1) == Some(&b'|') { 2 } else { 1 };
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((col, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(VerifyError::Syntax {
                        col,
                        msg: "expected -> after -".to_string(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((col, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(VerifyError::Syntax {
                    col,
                    msg: format!("unexpected character {other:?}"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.len + 1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), VerifyError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(VerifyError::Syntax {
                col: self.col(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn formula(&mut self) -> Result<Formula, VerifyError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, VerifyError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, VerifyError> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, VerifyError> {
        let lhs = self.unary()?;
        if let Some(Tok::Ident(w)) = self.peek() {
            if w == "U" {
                self.pos += 1;
                let rhs = self.until()?;
                return Ok(Formula::until(lhs, rhs));
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, VerifyError> {
        match self.bump() {
            Some(Tok::Bang) => Ok(Formula::not(self.unary()?)),
            Some(Tok::LParen) => {
                let inner = self.formula()?;
                self.expect(Tok::RParen, ")")?;
                Ok(inner)
            }
            Some(Tok::Ident(word)) => match word.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                "X" => Ok(Formula::next(self.unary()?)),
                "F" => Ok(Formula::finally(self.unary()?)),
                "G" => Ok(Formula::globally(self.unary()?)),
                "A" => Ok(Formula::forall(self.path()?)),
                "E" => Ok(Formula::exists(self.path()?)),
                "U" => Err(VerifyError::Syntax {
                    col: self.col(),
                    msg: "U is a binary operator".to_string(),
                }),
                _ => Ok(Formula::atom(word)),
            },
            _ => Err(VerifyError::Syntax {
                col: self.col(),
                msg: "expected a formula".to_string(),
            }),
        }
    }

    /// The path formula after a quantifier: `X f`, `F f`, `G f`, or
    /// `[f U g]`.
    fn path(&mut self) -> Result<Formula, VerifyError> {
        match self.bump() {
            Some(Tok::Ident(word)) if word == "X" => Ok(Formula::next(self.unary()?)),
            Some(Tok::Ident(word)) if word == "F" => Ok(Formula::finally(self.unary()?)),
            Some(Tok::Ident(word)) if word == "G" => Ok(Formula::globally(self.unary()?)),
            Some(Tok::LBracket) => {
                let lhs = self.formula()?;
                match self.bump() {
                    Some(Tok::Ident(w)) if w == "U" => {}
                    _ => {
                        return Err(VerifyError::Syntax {
                            col: self.col(),
                            msg: "expected U inside the quantifier brackets".to_string(),
                        });
                    }
                }
                let rhs = self.formula()?;
                self.expect(Tok::RBracket, "]")?;
                Ok(Formula::until(lhs, rhs))
            }
            _ => Err(VerifyError::Syntax {
                col: self.col(),
                msg: "a quantifier must be followed by X, F, G, or [f U g]".to_string(),
            }),
        }
    }
}

/// Parse a formula without resolving its atoms.
pub fn parse_formula(text: &str) -> Result<Formula, VerifyError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(VerifyError::Syntax {
            col: p.col(),
            msg: "trailing input after the formula".to_string(),
        });
    }
    Ok(f)
}

/// Parse, check well-formedness, and resolve every atom against the given
/// proposition names.
pub fn compile_property(
    text: &str,
    propositions: &BTreeSet<String>,
) -> Result<Formula, VerifyError> {
    let f = parse_formula(text)?;
    f.logic()?;
    for atom in f.atoms() {
        if !propositions.contains(&atom) {
            return Err(VerifyError::UnknownProposition(atom));
        }
    }
    Ok(f)
}
