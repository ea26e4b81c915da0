//! Shared test support: fixture loading, seeded random transition systems,
//! and deliberately naive reference implementations to cross-check the fast
//! algorithms against.
//!
//! Everything here trades speed for obviousness. The generators are fully
//! deterministic in their seed.

pub mod gen;
pub mod oracle;

use std::path::PathBuf;
use sysgraph_core::SystemGraph;
use sysgraph_dsl::{parse_source, SourceUnit};

/// The checked-in model corpus at the workspace root.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Parse a fixture by file name, panicking loudly on any diagnostic: tests
/// never want to tolerate a broken fixture.
pub fn load_fixture(name: &str) -> SystemGraph {
    let path = fixtures_dir().join(name);
    let src = SourceUnit::from_file(&path)
        .unwrap_or_else(|e| panic!("cannot read fixture {}: {e}", path.display()));
    match parse_source(&src) {
        Ok(g) => g,
        Err(diags) => {
            let lines: Vec<String> = diags.iter().map(|d| d.render(&src.path)).collect();
            panic!("fixture {} has diagnostics:\n{}", name, lines.join("\n"));
        }
    }
}

/// Load the components named by a composite fixture, assuming the sibling
/// naming convention `<component>.sg` in the same directory.
pub fn load_components(composite: &SystemGraph) -> Vec<SystemGraph> {
    composite
        .parallel
        .iter()
        .map(|name| load_fixture(&format!("{name}.sg")))
        .collect()
}
