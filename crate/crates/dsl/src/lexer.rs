//! Tokenizer for `.sg` model sources.
//!
//! Keywords are contextual: every word lexes as an identifier and the parser
//! gives meaning by position, so declarators may reuse words like `init`.
//! `#` starts a line comment.

use crate::diag::{Diagnostic, Span};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Colon,
    ColonEq,
    Semi,
    Comma,
    Assign,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    Quest,
    Amp,
    Pipe,
    Arrow,
    FatArrow,
    DotDot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "{name}"),
            Tok::Int(n) => return write!(f, "{n}"),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Colon => ":",
            Tok::ColonEq => ":=",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Bang => "!",
            Tok::Quest => "?",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::DotDot => "..",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannedTok {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(text: &str) -> Result<Vec<SpannedTok>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(SpannedTok {
                tok: $tok,
                span: Span::new(line, col, $len),
            });
            col += $len;
            i += $len as usize;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            '{' => push!(Tok::LBrace, 1),
            '}' => push!(Tok::RBrace, 1),
            '[' => push!(Tok::LBrack, 1),
            ']' => push!(Tok::RBrack, 1),
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            ';' => push!(Tok::Semi, 1),
            ',' => push!(Tok::Comma, 1),
            '?' => push!(Tok::Quest, 1),
            ':' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::ColonEq, 2);
                } else {
                    push!(Tok::Colon, 1);
                }
            }
            '=' => match chars.get(i + 1) {
                Some('=') => push!(Tok::EqEq, 2),
                Some('>') => push!(Tok::FatArrow, 2),
                _ => push!(Tok::Assign, 1),
            },
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Ne, 2);
                } else {
                    push!(Tok::Bang, 1);
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Le, 2);
                } else {
                    push!(Tok::Lt, 1);
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Ge, 2);
                } else {
                    push!(Tok::Gt, 1);
                }
            }
            '&' => {
                if chars.get(i + 1) == Some(&'&') {
                    push!(Tok::Amp, 2);
                } else {
                    push!(Tok::Amp, 1);
                }
            }
            '|' => {
                if chars.get(i + 1) == Some(&'|') {
                    push!(Tok::Pipe, 2);
                } else {
                    push!(Tok::Pipe, 1);
                }
            }
            '.' => {
                if chars.get(i + 1) == Some(&'.') {
                    push!(Tok::DotDot, 2);
                } else {
                    errors.push(Diagnostic::error(
                        Span::new(line, col, 1),
                        "lex",
                        "stray `.` (did you mean `..`?)",
                    ));
                    i += 1;
                    col += 1;
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    push!(Tok::Arrow, 2);
                } else if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    let start = i;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let lexeme: String = chars[start..i].iter().collect();
                    let len = (i - start) as u32;
                    match lexeme.parse::<i64>() {
                        Ok(n) => out.push(SpannedTok {
                            tok: Tok::Int(n),
                            span: Span::new(line, col, len),
                        }),
                        Err(_) => errors.push(Diagnostic::error(
                            Span::new(line, col, len),
                            "lex",
                            format!("integer literal out of range: {lexeme}"),
                        )),
                    }
                    col += len;
                } else {
                    errors.push(Diagnostic::error(
                        Span::new(line, col, 1),
                        "lex",
                        "stray `-` (did you mean `->` or a negative number?)",
                    ));
                    i += 1;
                    col += 1;
                }
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lexeme: String = chars[start..i].iter().collect();
                let len = (i - start) as u32;
                match lexeme.parse::<i64>() {
                    Ok(n) => out.push(SpannedTok {
                        tok: Tok::Int(n),
                        span: Span::new(line, col, len),
                    }),
                    Err(_) => errors.push(Diagnostic::error(
                        Span::new(line, col, len),
                        "lex",
                        format!("integer literal out of range: {lexeme}"),
                    )),
                }
                col += len;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let lexeme: String = chars[start..i].iter().collect();
                let len = (i - start) as u32;
                out.push(SpannedTok {
                    tok: Tok::Ident(lexeme),
                    span: Span::new(line, col, len),
                });
                col += len;
            }
            _ => {
                errors.push(Diagnostic::error(
                    Span::new(line, col, 1),
                    "lex",
                    format!("unexpected character {c:?}"),
                ));
                i += 1;
                col += 1;
            }
        }
    }

    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}
