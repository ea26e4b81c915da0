//! Greatest simulation over a state space given as label and successor
//! tables.

use std::collections::BTreeSet;

/// Compute the largest simulation relation: `result[s][t]` holds when `t`
/// simulates `s`, that is, the two carry equal labels and every move of `s`
/// can be answered by some move of `t` into the relation again.
///
/// Runs a dirty-state sweep: a state is rechecked only after one of its
/// successors lost a candidate simulator.
pub fn greatest_simulation(labels: &[&BTreeSet<String>], succs: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = labels.len();
    let mut preds = vec![Vec::new(); n];
    for (s, out) in succs.iter().enumerate() {
        for &t in out {
            preds[t].push(s);
        }
    }
    let mut sim: Vec<Vec<bool>> = (0..n)
        .map(|s| (0..n).map(|t| labels[s] == labels[t]).collect())
        .collect();
    let mut dirty: BTreeSet<usize> = (0..n).collect();

    while let Some(s) = dirty.pop_first() {
        for t in 0..n {
            if !sim[s][t] {
                continue;
            }
            let answered = succs[s]
                .iter()
                .all(|&sp| succs[t].iter().any(|&tp| sim[sp][tp]));
            if !answered {
                sim[s][t] = false;
                dirty.extend(preds[s].iter().copied());
            }
        }
    }
    sim
}
