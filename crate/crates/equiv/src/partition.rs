//! Coarsest label-respecting partition by iterated signature splitting.

use std::collections::{BTreeMap, BTreeSet};
use sysgraph_core::TransitionSystem;

/// Assign each state its equivalence class id. Two states end in the same
/// class exactly when they carry the same labels and their successor sets
/// hit the same classes; this is the greatest bisimulation over one system.
///
/// Class ids are deterministic: renumbered each round by signature order,
/// which keeps the relative order of earlier classes.
pub fn bisim_classes(ts: &TransitionSystem) -> Vec<usize> {
    let labels: Vec<&BTreeSet<String>> = ts.states.iter().map(|s| &s.labels).collect();
    classes_of(&labels, &ts.succ_lists())
}

/// The same computation over raw tables, so a disjoint union of two systems
/// can be classified without materializing a combined `TransitionSystem`.
pub(crate) fn classes_of(labels: &[&BTreeSet<String>], succs: &[Vec<usize>]) -> Vec<usize> {
    let n = labels.len();
    let mut ids: BTreeMap<&BTreeSet<String>, usize> = BTreeMap::new();
    for ls in labels {
        let next = ids.len();
        ids.entry(ls).or_insert(next);
    }
    let mut class: Vec<usize> = labels.iter().map(|ls| ids[ls]).collect();

    loop {
        let sigs: Vec<(usize, BTreeSet<usize>)> = (0..n)
            .map(|s| (class[s], succs[s].iter().map(|&t| class[t]).collect()))
            .collect();
        let mut sig_ids: BTreeMap<&(usize, BTreeSet<usize>), usize> = BTreeMap::new();
        for sig in sigs.iter().collect::<BTreeSet<_>>() {
            let next = sig_ids.len();
            sig_ids.insert(sig, next);
        }
        let next: Vec<usize> = sigs.iter().map(|sig| sig_ids[sig]).collect();
        if next == class {
            return class;
        }
        class = next;
    }
}
