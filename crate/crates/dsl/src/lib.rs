//! Text frontend for system-graph models.
//!
//! `parse_source` takes model text through lexing, parsing, name resolution,
//! and semantic validation, producing either a [`sysgraph_core::SystemGraph`]
//! or a list of diagnostics with source positions. `pretty` renders a graph
//! back to canonical text; `validate_graph` re-checks a graph built without
//! source (no spans, so diagnostics point at the whole file).

pub mod ast;
pub mod diag;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod resolve;
pub mod validate;

pub use diag::{Diagnostic, Severity, SourceUnit, Span};
pub use printer::pretty;
pub use validate::validate_graph;

use sysgraph_core::SystemGraph;

/// Parse and validate model text. Returns the graph only when there are no
/// errors; warnings alone do not fail the parse.
pub fn parse_source(src: &SourceUnit) -> Result<SystemGraph, Vec<Diagnostic>> {
    let toks = lexer::lex(&src.text)?;
    let unit = parser::parse_tokens(toks)?;
    let (g, idx, mut diags) = resolve::resolve(&unit);
    diags.extend(validate::semantic_diagnostics(&g, &idx));
    diags.sort_by(|a, b| {
        (a.span.line, a.span.col, &a.code).cmp(&(b.span.line, b.span.col, &b.code))
    });
    if diags.iter().any(|d| d.severity == Severity::Error) {
        Err(diags)
    } else {
        Ok(g)
    }
}

/// Convenience wrapper: parse text held in memory, labeling diagnostics with
/// `path` when rendered.
pub fn parse_text(text: &str) -> Result<SystemGraph, Vec<Diagnostic>> {
    parse_source(&SourceUnit::new("<memory>", text))
}
