//! Raw syntax tree, prior to name resolution.

use crate::diag::Span;
use sysgraph_core::CmpOp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub is_module: bool,
    pub name: String,
    pub name_span: Span,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Vars(Vec<VarDecl>),
    Chan(ChanDecl),
    State(StateDecl),
    Trans(TransDecl),
    Prop(PropDecl),
    Label(LabelDecl),
    Terminal(Vec<(String, Span)>),
    Parallel(Vec<(String, Span)>),
    Embed {
        span: Span,
        inner: (String, Span),
        at: (String, Span),
    },
}

/// A literal-or-identifier in value position; identifiers are resolved later
/// (symbol enumerant vs variable reference, depending on context).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawValue {
    Bool(bool),
    Int(i64),
    Ident(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawKind {
    Bool,
    Int(i64, i64),
    Sym(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub span: Span,
    pub kind: RawKind,
    pub kind_span: Span,
    pub default: Option<(RawValue, Span)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChanDecl {
    pub name: String,
    pub span: Span,
    pub kind: RawKind,
    pub kind_span: Span,
    pub cap: u64,
    pub initial: Vec<(RawValue, Span)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDecl {
    pub name: String,
    pub span: Span,
    pub pins: Vec<Pin>,
    pub is_init: bool,
    pub init_guard: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pin {
    pub var: String,
    pub var_span: Span,
    pub value: RawValue,
    pub value_span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransDecl {
    pub span: Span,
    pub src: (String, Span),
    pub dst: (String, Span),
    pub guard: Option<Expr>,
    pub action: RawAction,
    pub action_span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawAction {
    Named(String),
    Send { chan: String, msg: (RawValue, Span) },
    Recv { chan: String, var: (String, Span) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropDecl {
    pub name: String,
    pub span: Span,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDecl {
    pub span: Span,
    pub expr: Expr,
    pub prop: (String, Span),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    True(Span),
    False(Span),
    /// A bare identifier, sugar for `<ident> == true` on a bool variable.
    Bare(String, Span),
    Cmp {
        var: (String, Span),
        op: CmpOp,
        rhs: (RawValue, Span),
    },
    Not(Box<Expr>, Span),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::True(s) | Expr::False(s) | Expr::Bare(_, s) | Expr::Not(_, s) => *s,
            Expr::Cmp { var, .. } => var.1,
            Expr::And(a, _) | Expr::Or(a, _) | Expr::Implies(a, _) => a.span(),
        }
    }
}
