//! Recursive-descent parser from tokens to the raw syntax tree.
//!
//! On a syntax error inside an item the parser reports it and resynchronizes
//! at the next `;` (or `}`), so several errors surface in one pass.

use crate::ast::*;
use crate::diag::{Diagnostic, Span};
use crate::lexer::{SpannedTok, Tok};
use sysgraph_core::CmpOp;

pub fn parse_tokens(tokens: Vec<SpannedTok>) -> Result<Unit, Vec<Diagnostic>> {
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        errors: Vec::new(),
    };
    let unit = p.unit();
    match unit {
        Some(u) if p.errors.is_empty() => Ok(u),
        _ => Err(p.errors),
    }
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
    errors: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map(|t| t.span).unwrap_or_else(|| {
            self.toks
                .last()
                .map(|t| Span::new(t.span.line, t.span.col + t.span.len, 0))
                .unwrap_or_else(Span::whole_file)
        })
    }

    fn bump(&mut self) -> Option<SpannedTok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here<M: Into<String>>(&mut self, msg: M) {
        let span = self.span();
        self.errors.push(Diagnostic::error(span, "syntax", msg));
    }

    fn expect(&mut self, want: Tok) -> bool {
        if self.peek() == Some(&want) {
            self.pos += 1;
            true
        } else {
            let found = self
                .peek()
                .map(|t| format!("`{t}`"))
                .unwrap_or_else(|| "end of file".to_string());
            self.error_here(format!("expected `{want}`, found {found}"));
            false
        }
    }

    fn expect_ident(&mut self, what: &str) -> Option<(String, Span)> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Ident(name) => Some((name, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => {
                self.error_here(format!("expected {what}"));
                None
            }
        }
    }

    /// Is the current token the given contextual keyword?
    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> bool {
        if self.eat_kw(kw) {
            true
        } else {
            let found = self
                .peek()
                .map(|t| format!("`{t}`"))
                .unwrap_or_else(|| "end of file".to_string());
            self.error_here(format!("expected `{kw}`, found {found}"));
            false
        }
    }

    /// Skip ahead past the next `;`, or stop before `}`/end of file.
    fn synchronize(&mut self) {
        loop {
            match self.peek() {
                None | Some(Tok::RBrace) => return,
                Some(Tok::Semi) => {
                    self.pos += 1;
                    return;
                }
                _ => {
                    self.pos += 1;
                }
            }
        }
    }

    fn unit(&mut self) -> Option<Unit> {
        let is_module = if self.at_kw("system") {
            self.pos += 1;
            false
        } else if self.at_kw("module") {
            self.pos += 1;
            true
        } else {
            if self.toks.is_empty() {
                self.errors.push(Diagnostic::error(
                    Span::whole_file(),
                    "missing-init",
                    "empty source: no system unit, so no initial state declarator",
                ));
            } else {
                self.error_here("expected `system` or `module`");
            }
            return None;
        };
        let (name, name_span) = self.expect_ident("a unit name")?;
        if !self.expect(Tok::LBrace) {
            return None;
        }
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None => {
                    self.error_here("expected `}` to close the unit");
                    break;
                }
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                _ => {
                    let before = self.errors.len();
                    match self.item() {
                        Some(item) => items.push(item),
                        None => {
                            debug_assert!(self.errors.len() > before);
                            self.synchronize();
                        }
                    }
                }
            }
        }
        if let Some(t) = self.bump() {
            self.errors.push(Diagnostic::error(
                t.span,
                "syntax",
                "unexpected tokens after the closing `}`",
            ));
        }
        Some(Unit {
            is_module,
            name,
            name_span,
            items,
        })
    }

    fn item(&mut self) -> Option<Item> {
        match self.peek() {
            Some(Tok::Ident(kw)) => match kw.as_str() {
                "vars" => self.vars_item(),
                "chan" => self.chan_item(),
                "state" => self.state_item(),
                "trans" => self.trans_item(),
                "prop" => self.prop_item(),
                "label" => self.label_item(),
                "terminal" => self.name_list_item("terminal").map(Item::Terminal),
                "parallel" => self.name_list_item("parallel").map(Item::Parallel),
                "embed" => self.embed_item(),
                other => {
                    self.error_here(format!(
                        "expected an item (vars, chan, state, trans, prop, label, terminal, parallel, embed), found `{other}`"
                    ));
                    None
                }
            },
            _ => {
                self.error_here("expected an item");
                None
            }
        }
    }

    fn vars_item(&mut self) -> Option<Item> {
        self.expect_kw("vars");
        self.expect(Tok::LBrace).then_some(())?;
        let mut decls = Vec::new();
        while !matches!(self.peek(), Some(Tok::RBrace) | None) {
            let (name, span) = self.expect_ident("a variable name")?;
            self.expect(Tok::Colon).then_some(())?;
            let kind_span = self.span();
            let kind = self.kind()?;
            let default = if self.peek() == Some(&Tok::Assign) {
                self.pos += 1;
                let vspan = self.span();
                Some((self.value()?, vspan))
            } else {
                None
            };
            self.expect(Tok::Semi).then_some(())?;
            decls.push(VarDecl {
                name,
                span,
                kind,
                kind_span,
                default,
            });
        }
        self.expect(Tok::RBrace).then_some(())?;
        Some(Item::Vars(decls))
    }

    fn kind(&mut self) -> Option<RawKind> {
        let (word, span) = self.expect_ident("a kind (bool, int[lo..hi], sym[a,b,...])")?;
        match word.as_str() {
            "bool" => Some(RawKind::Bool),
            "int" => {
                if self.peek() != Some(&Tok::LBrack) {
                    self.errors.push(Diagnostic::error(
                        span,
                        "bad-kind",
                        "integer kinds need an explicit range: int[lo..hi]",
                    ));
                    return None;
                }
                self.pos += 1;
                let lo = self.int_lit()?;
                self.expect(Tok::DotDot).then_some(())?;
                let hi = self.int_lit()?;
                self.expect(Tok::RBrack).then_some(())?;
                Some(RawKind::Int(lo, hi))
            }
            "sym" => {
                self.expect(Tok::LBrack).then_some(())?;
                let mut names = Vec::new();
                loop {
                    let (n, _) = self.expect_ident("an enumerant name")?;
                    names.push(n);
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RBrack).then_some(())?;
                Some(RawKind::Sym(names))
            }
            other => {
                self.errors.push(Diagnostic::error(
                    span,
                    "syntax",
                    format!("unknown kind `{other}` (expected bool, int[lo..hi], or sym[...])"),
                ));
                None
            }
        }
    }

    fn int_lit(&mut self) -> Option<i64> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Int(n) => Some(n),
                    _ => unreachable!(),
                }
            }
            _ => {
                self.error_here("expected an integer literal");
                None
            }
        }
    }

    fn value(&mut self) -> Option<RawValue> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Int(n) => Some(RawValue::Int(n)),
                    _ => unreachable!(),
                }
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                Some(RawValue::Bool(true))
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                Some(RawValue::Bool(false))
            }
            Some(Tok::Ident(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Ident(s) => Some(RawValue::Ident(s)),
                    _ => unreachable!(),
                }
            }
            _ => {
                self.error_here("expected a value");
                None
            }
        }
    }

    fn chan_item(&mut self) -> Option<Item> {
        self.expect_kw("chan");
        let (name, span) = self.expect_ident("a channel name")?;
        self.expect(Tok::Colon).then_some(())?;
        let kind_span = self.span();
        let kind = self.kind()?;
        self.expect_kw("cap").then_some(())?;
        let cap = self.int_lit()?;
        if cap < 0 {
            self.errors.push(Diagnostic::error(
                span,
                "syntax",
                "channel capacity cannot be negative",
            ));
            return None;
        }
        let mut initial = Vec::new();
        if self.eat_kw("init") {
            self.expect(Tok::LBrack).then_some(())?;
            while self.peek() != Some(&Tok::RBrack) {
                let vspan = self.span();
                initial.push((self.value()?, vspan));
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.expect(Tok::RBrack).then_some(())?;
        }
        self.expect(Tok::Semi).then_some(())?;
        Some(Item::Chan(ChanDecl {
            name,
            span,
            kind,
            kind_span,
            cap: cap as u64,
            initial,
        }))
    }

    fn state_item(&mut self) -> Option<Item> {
        self.expect_kw("state");
        let (name, span) = self.expect_ident("a state declarator name")?;
        let mut pins = Vec::new();
        if self.peek() == Some(&Tok::LBrace) {
            self.pos += 1;
            while self.peek() != Some(&Tok::RBrace) {
                let (var, var_span) = self.expect_ident("a variable name")?;
                self.expect(Tok::Assign).then_some(())?;
                let value_span = self.span();
                let value = self.value()?;
                pins.push(Pin {
                    var,
                    var_span,
                    value,
                    value_span,
                });
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.expect(Tok::RBrace).then_some(())?;
        }
        let mut is_init = false;
        let mut init_guard = None;
        if self.eat_kw("init") {
            is_init = true;
            if self.eat_kw("when") {
                init_guard = Some(self.expr()?);
            }
        }
        self.expect(Tok::Semi).then_some(())?;
        Some(Item::State(StateDecl {
            name,
            span,
            pins,
            is_init,
            init_guard,
        }))
    }

    fn trans_item(&mut self) -> Option<Item> {
        let span = self.span();
        self.expect_kw("trans");
        let src = self.expect_ident("a source declarator")?;
        self.expect(Tok::Arrow).then_some(())?;
        let dst = self.expect_ident("a target declarator")?;
        let guard = if self.eat_kw("when") {
            Some(self.expr()?)
        } else {
            None
        };
        if !self.eat_kw("on") {
            self.error_here(
                "every transition needs an action: `on <name>`, `on c!<msg>`, or `on c?<var>`",
            );
            return None;
        }
        let action_span = self.span();
        let (first, _) = self.expect_ident("an action name or channel")?;
        let action = match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                let mspan = self.span();
                let msg = self.value()?;
                RawAction::Send {
                    chan: first,
                    msg: (msg, mspan),
                }
            }
            Some(Tok::Quest) => {
                self.pos += 1;
                let var = self.expect_ident("a variable to receive into")?;
                RawAction::Recv { chan: first, var }
            }
            _ => RawAction::Named(first),
        };
        self.expect(Tok::Semi).then_some(())?;
        Some(Item::Trans(TransDecl {
            span,
            src,
            dst,
            guard,
            action,
            action_span,
        }))
    }

    fn prop_item(&mut self) -> Option<Item> {
        self.expect_kw("prop");
        let (name, span) = self.expect_ident("a proposition name")?;
        self.expect(Tok::ColonEq).then_some(())?;
        let expr = self.expr()?;
        self.expect(Tok::Semi).then_some(())?;
        Some(Item::Prop(PropDecl { name, span, expr }))
    }

    fn label_item(&mut self) -> Option<Item> {
        let span = self.span();
        self.expect_kw("label");
        self.expect_kw("when").then_some(())?;
        let expr = self.expr()?;
        self.expect(Tok::FatArrow).then_some(())?;
        let prop = self.expect_ident("a proposition name")?;
        self.expect(Tok::Semi).then_some(())?;
        Some(Item::Label(LabelDecl { span, expr, prop }))
    }

    fn name_list_item(&mut self, kw: &str) -> Option<Vec<(String, Span)>> {
        self.expect_kw(kw);
        let mut names = Vec::new();
        loop {
            names.push(self.expect_ident("a name")?);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::Semi).then_some(())?;
        Some(names)
    }

    fn embed_item(&mut self) -> Option<Item> {
        let span = self.span();
        self.expect_kw("embed");
        let inner = self.expect_ident("an embedded graph name")?;
        self.expect_kw("at").then_some(())?;
        let at = self.expect_ident("a declarator name")?;
        self.expect(Tok::Semi).then_some(())?;
        Some(Item::Embed { span, inner, at })
    }

    /// expr := or_expr ('->' expr)?   (right-associative implication)
    fn expr(&mut self) -> Option<Expr> {
        let lhs = self.or_expr()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.expr()?;
            Some(Expr::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Some(lhs)
        }
    }

    fn or_expr(&mut self) -> Option<Expr> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Some(lhs)
    }

    fn and_expr(&mut self) -> Option<Expr> {
        let mut lhs = self.unary_expr()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.unary_expr()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Some(lhs)
    }

    fn unary_expr(&mut self) -> Option<Expr> {
        if self.peek() == Some(&Tok::Bang) {
            let span = self.span();
            self.pos += 1;
            let inner = self.unary_expr()?;
            return Some(Expr::Not(Box::new(inner), span));
        }
        self.primary_expr()
    }

    fn primary_expr(&mut self) -> Option<Expr> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen).then_some(())?;
                Some(e)
            }
            Some(Tok::Ident(s)) if s == "true" => {
                let span = self.span();
                self.pos += 1;
                Some(Expr::True(span))
            }
            Some(Tok::Ident(s)) if s == "false" => {
                let span = self.span();
                self.pos += 1;
                Some(Expr::False(span))
            }
            Some(Tok::Ident(_)) => {
                let (name, span) = self.expect_ident("a variable")?;
                let op = match self.peek() {
                    Some(Tok::EqEq) | Some(Tok::Assign) => Some(CmpOp::Eq),
                    Some(Tok::Ne) => Some(CmpOp::Ne),
                    Some(Tok::Lt) => Some(CmpOp::Lt),
                    Some(Tok::Le) => Some(CmpOp::Le),
                    Some(Tok::Gt) => Some(CmpOp::Gt),
                    Some(Tok::Ge) => Some(CmpOp::Ge),
                    _ => None,
                };
                match op {
                    None => Some(Expr::Bare(name, span)),
                    Some(op) => {
                        self.pos += 1;
                        let rhs_span = self.span();
                        let rhs = self.value()?;
                        Some(Expr::Cmp {
                            var: (name, span),
                            op,
                            rhs: (rhs, rhs_span),
                        })
                    }
                }
            }
            _ => {
                self.error_here("expected an expression");
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::lex;

    fn parse(text: &str) -> Result<Unit, Vec<Diagnostic>> {
        parse_tokens(lex(text).unwrap())
    }

    #[test]
    fn parses_a_minimal_system() {
        let u = parse("system t { state a init; trans a -> a on go; }").unwrap();
        assert_eq!(u.name, "t");
        assert!(!u.is_module);
        assert_eq!(u.items.len(), 2);
        match &u.items[0] {
            Item::State(s) => {
                assert_eq!(s.name, "a");
                assert!(s.is_init);
                assert!(s.pins.is_empty());
            }
            other => panic!("unexpected item: {other:?}"),
        }
    }

    #[test]
    fn parses_declarators_named_like_keywords() {
        let u = parse("system t { state init {status=0, paid=false} init; }").unwrap();
        match &u.items[0] {
            Item::State(s) => {
                assert_eq!(s.name, "init");
                assert!(s.is_init);
                assert_eq!(s.pins.len(), 2);
                assert_eq!(s.pins[0].var, "status");
                assert_eq!(s.pins[0].value, RawValue::Int(0));
                assert_eq!(s.pins[1].value, RawValue::Bool(false));
            }
            other => panic!("unexpected item: {other:?}"),
        }
    }

    #[test]
    fn parses_guards_with_precedence() {
        let u = parse("system t { prop P := a == 1 & !b | c -> d != 2; }").unwrap();
        match &u.items[0] {
            Item::Prop(p) => match &p.expr {
                Expr::Implies(lhs, _) => match lhs.as_ref() {
                    Expr::Or(l, _) => assert!(matches!(l.as_ref(), Expr::And(..))),
                    other => panic!("expected or at implication lhs: {other:?}"),
                },
                other => panic!("expected implication: {other:?}"),
            },
            other => panic!("unexpected item: {other:?}"),
        }
    }

    #[test]
    fn parses_channel_with_initial_contents() {
        let u = parse("system t { chan c: int[0..9] cap 1 init [3]; }").unwrap();
        match &u.items[0] {
            Item::Chan(c) => {
                assert_eq!(c.name, "c");
                assert_eq!(c.kind, RawKind::Int(0, 9));
                assert_eq!(c.cap, 1);
                assert_eq!(c.initial.len(), 1);
                assert_eq!(c.initial[0].0, RawValue::Int(3));
            }
            other => panic!("unexpected item: {other:?}"),
        }
    }

    #[test]
    fn parses_actions() {
        let u = parse(concat!(
            "system t { trans a -> b on c?tx; trans b -> a when tx < 5 on c!1; ",
            "trans a -> a on step; }"
        ))
        .unwrap();
        let actions: Vec<&RawAction> = u
            .items
            .iter()
            .map(|i| match i {
                Item::Trans(t) => &t.action,
                other => panic!("unexpected item: {other:?}"),
            })
            .collect();
        assert!(
            matches!(actions[0], RawAction::Recv { chan, var } if chan == "c" && var.0 == "tx")
        );
        assert!(matches!(actions[1], RawAction::Send { chan, .. } if chan == "c"));
        assert!(matches!(actions[2], RawAction::Named(n) if n == "step"));
    }

    #[test]
    fn transition_without_action_is_an_error() {
        let errs = parse("system t { trans a -> b; }").unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("needs an action")));
    }

    #[test]
    fn missing_range_on_int_kind_is_reported() {
        let errs = parse("system t { chan c: int cap 1; }").unwrap_err();
        assert!(errs.iter().any(|d| d.code == "bad-kind"));
    }

    #[test]
    fn recovers_and_reports_multiple_errors() {
        let errs =
            parse("system t { state ; trans a -> ; state ok init; prop := 1; }").unwrap_err();
        assert!(errs.len() >= 3);
        assert!(errs.iter().all(|d| d.code == "syntax"));
    }

    #[test]
    fn empty_source_reports_missing_initial() {
        let errs = parse("").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, "missing-init");
        let errs = parse("# only a comment\n").unwrap_err();
        assert_eq!(errs[0].code, "missing-init");
    }

    #[test]
    fn init_modifier_with_guard() {
        let u = parse("system t { state s {x=1} init when x == 1; }").unwrap();
        match &u.items[0] {
            Item::State(s) => {
                assert!(s.is_init);
                assert!(s.init_guard.is_some());
            }
            other => panic!("unexpected item: {other:?}"),
        }
    }

    #[test]
    fn parallel_and_embed_items() {
        let u = parse("system t { parallel a, b; embed inner at pending; }").unwrap();
        assert!(matches!(&u.items[0], Item::Parallel(ns) if ns.len() == 2));
        assert!(
            matches!(&u.items[1], Item::Embed { inner, at, .. } if inner.0 == "inner" && at.0 == "pending")
        );
    }
}
