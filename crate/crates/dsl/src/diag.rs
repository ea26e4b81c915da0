//! Source units and diagnostics.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A file of model source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: String,
    pub text: String,
}

impl SourceUnit {
    pub fn new<P: Into<String>, T: Into<String>>(path: P, text: T) -> Self {
        SourceUnit {
            path: path.into(),
            text: text.into(),
        }
    }

    pub fn from_file(path: &std::path::Path) -> std::io::Result<SourceUnit> {
        Ok(SourceUnit {
            path: path.display().to_string(),
            text: std::fs::read_to_string(path)?,
        })
    }
}

/// A position range in the source: 1-based line and column plus length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub len: u32,
}

impl Span {
    pub fn new(line: u32, col: u32, len: u32) -> Self {
        Span { line, col, len }
    }

    /// The fallback span for diagnostics raised without source context.
    pub fn whole_file() -> Self {
        Span::new(1, 1, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

/// One reported problem, printable as `path:line:col: severity[code]: message`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error<C: Into<String>, M: Into<String>>(span: Span, code: C, message: M) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn render(&self, path: &str) -> String {
        format!(
            "{}:{}:{}: {}[{}]: {}",
            path, self.span.line, self.span.col, self.severity, self.code, self.message
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_compiler_style() {
        let d = Diagnostic::error(
            Span::new(3, 7, 4),
            "unresolved-name",
            "unknown variable gas",
        );
        assert_eq!(
            d.render("model.sg"),
            "model.sg:3:7: error[unresolved-name]: unknown variable gas"
        );
    }
}
