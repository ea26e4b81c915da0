//! Two-system refinement reports with independently checkable witnesses.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use sysgraph_core::TransitionSystem;

use crate::partition::classes_of;
use crate::simulation::greatest_simulation;

/// Which of the two compared systems owns an unmatched move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Why a pair of anchor states is distinguishable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDetail {
    /// The anchors already disagree on their proposition sets.
    LabelMismatch {
        left_labels: BTreeSet<String>,
        right_labels: BTreeSet<String>,
    },
    /// One side has a move the other cannot answer while staying related.
    UnmatchedMove {
        side: Side,
        action: String,
        successor: String,
    },
}

/// A distinguishing observation anchored at the two initial states,
/// identified by their full state tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub left: String,
    pub right: String,
    pub detail: WitnessDetail,
}

/// Outcome of one simulation direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationCheck {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Combined verdicts of one comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefineReport {
    pub bisimilar: bool,
    /// Does the right system simulate the left one?
    pub left_refines_right: SimulationCheck,
    /// Does the left system simulate the right one?
    pub right_refines_left: SimulationCheck,
    pub bisim_witness: Option<Witness>,
}

/// What a witness claims to disprove; used when validating one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    NotBisimilar,
    LeftDoesNotRefineRight,
    RightDoesNotRefineLeft,
}

/// The disjoint union of the two systems, flattened into tables. Right-side
/// states live at `left.state_count()..`.
struct Union {
    labels: Vec<BTreeSet<String>>,
    tokens: Vec<String>,
    succs: Vec<Vec<usize>>,
    /// Outgoing moves as (action text, union successor), sorted so the
    /// lexicographically smallest witness move is chosen first.
    moves: Vec<Vec<(String, usize)>>,
    left_initials: Vec<usize>,
    right_initials: Vec<usize>,
}

impl Union {
    fn build(left: &TransitionSystem, right: &TransitionSystem) -> Union {
        let offset = left.state_count();
        let n = offset + right.state_count();
        let mut labels = Vec::with_capacity(n);
        let mut tokens = Vec::with_capacity(n);
        for s in left.states.iter().chain(right.states.iter()) {
            labels.push(s.labels.clone());
            tokens.push(s.key.token());
        }
        let mut moves: Vec<Vec<(String, usize)>> = vec![Vec::new(); n];
        for t in &left.transitions {
            moves[t.src].push((t.action.to_string(), t.dst));
        }
        for t in &right.transitions {
            moves[offset + t.src].push((t.action.to_string(), offset + t.dst));
        }
        for out in &mut moves {
            out.sort_by(|a, b| (&a.0, &tokens[a.1]).cmp(&(&b.0, &tokens[b.1])));
            out.dedup();
        }
        let succs = moves
            .iter()
            .map(|out| {
                let set: BTreeSet<usize> = out.iter().map(|&(_, d)| d).collect();
                set.into_iter().collect()
            })
            .collect();
        Union {
            labels,
            tokens,
            succs,
            moves,
            left_initials: left.initials.iter().copied().collect(),
            right_initials: right.initials.iter().map(|&i| offset + i).collect(),
        }
    }

    fn label_refs(&self) -> Vec<&BTreeSet<String>> {
        self.labels.iter().collect()
    }
}

/// Compare two explicit systems and report bisimilarity plus both
/// refinement directions, with a witness for every failing verdict.
pub fn refine_check(left: &TransitionSystem, right: &TransitionSystem) -> RefineReport {
    let u = Union::build(left, right);
    let refs = u.label_refs();
    let class = classes_of(&refs, &u.succs);
    let sim = greatest_simulation(&refs, &u.succs);

    let forward = sim_direction(&u, &sim, Side::Left);
    let backward = sim_direction(&u, &sim, Side::Right);
    let (bisimilar, bisim_witness) = bisim_verdict(&u, &class);

    RefineReport {
        bisimilar,
        left_refines_right: forward,
        right_refines_left: backward,
        bisim_witness,
    }
}

/// Check one simulation direction. For `Side::Left` the left system is the
/// refining one and the right must answer its moves; for `Side::Right` the
/// roles swap.
fn sim_direction(u: &Union, sim: &[Vec<bool>], refining: Side) -> SimulationCheck {
    let (movers, answerers) = match refining {
        Side::Left => (&u.left_initials, &u.right_initials),
        Side::Right => (&u.right_initials, &u.left_initials),
    };
    let simulated_by = |s: usize, t: usize| sim[s][t];
    let failing = movers
        .iter()
        .find(|&&s| !answerers.iter().any(|&t| simulated_by(s, t)));
    let Some(&mover) = failing else {
        return SimulationCheck {
            holds: true,
            witness: None,
        };
    };
    let answerer = *answerers.first().expect("at least one initial state");
    let detail = if u.labels[mover] != u.labels[answerer] {
        mismatch_detail(u, mover, refining)
    } else {
        let unmatched = u.moves[mover]
            .iter()
            .find(|(_, sp)| !u.succs[answerer].iter().any(|&tp| simulated_by(*sp, tp)))
            .expect("an unanswerable move exists when simulation fails on equal labels");
        WitnessDetail::UnmatchedMove {
            side: refining,
            action: unmatched.0.clone(),
            successor: u.tokens[unmatched.1].clone(),
        }
    };
    let (l, r) = match refining {
        Side::Left => (mover, answerer),
        Side::Right => (answerer, mover),
    };
    SimulationCheck {
        holds: false,
        witness: Some(Witness {
            left: u.tokens[l].clone(),
            right: u.tokens[r].clone(),
            detail,
        }),
    }
}

fn mismatch_detail(u: &Union, mover: usize, refining: Side) -> WitnessDetail {
    let other = match refining {
        Side::Left => u.right_initials[0],
        Side::Right => u.left_initials[0],
    };
    let (l, r) = match refining {
        Side::Left => (mover, other),
        Side::Right => (other, mover),
    };
    WitnessDetail::LabelMismatch {
        left_labels: u.labels[l].clone(),
        right_labels: u.labels[r].clone(),
    }
}

fn bisim_verdict(u: &Union, class: &[usize]) -> (bool, Option<Witness>) {
    let uncovered = |from: &[usize], into: &[usize]| {
        from.iter()
            .find(|&&s| !into.iter().any(|&t| class[s] == class[t]))
            .copied()
    };
    let anchor = match uncovered(&u.left_initials, &u.right_initials) {
        Some(ia) => Some((ia, u.right_initials[0])),
        None => uncovered(&u.right_initials, &u.left_initials).map(|ib| (u.left_initials[0], ib)),
    };
    let Some((ia, ib)) = anchor else {
        return (true, None);
    };
    let detail = if u.labels[ia] != u.labels[ib] {
        WitnessDetail::LabelMismatch {
            left_labels: u.labels[ia].clone(),
            right_labels: u.labels[ib].clone(),
        }
    } else {
        let unmatched = |s: usize, t: usize| {
            u.moves[s]
                .iter()
                .find(|(_, sp)| !u.succs[t].iter().any(|&tp| class[*sp] == class[tp]))
        };
        if let Some(m) = unmatched(ia, ib) {
            WitnessDetail::UnmatchedMove {
                side: Side::Left,
                action: m.0.clone(),
                successor: u.tokens[m.1].clone(),
            }
        } else {
            let m = unmatched(ib, ia)
                .expect("some side has an unanswerable move when classes differ on equal labels");
            WitnessDetail::UnmatchedMove {
                side: Side::Right,
                action: m.0.clone(),
                successor: u.tokens[m.1].clone(),
            }
        }
    };
    (
        false,
        Some(Witness {
            left: u.tokens[ia].clone(),
            right: u.tokens[ib].clone(),
            detail,
        }),
    )
}

/// Re-derive the relations from scratch and confirm every statement a
/// witness makes. Returns the first broken claim as an error message.
pub fn validate_witness(
    left: &TransitionSystem,
    right: &TransitionSystem,
    witness: &Witness,
    claim: Claim,
) -> Result<(), String> {
    let u = Union::build(left, right);
    let refs = u.label_refs();
    let anchor_l = *u
        .left_initials
        .iter()
        .find(|&&s| u.tokens[s] == witness.left)
        .ok_or_else(|| format!("left anchor {} is not an initial state", witness.left))?;
    let anchor_r = *u
        .right_initials
        .iter()
        .find(|&&s| u.tokens[s] == witness.right)
        .ok_or_else(|| format!("right anchor {} is not an initial state", witness.right))?;

    let related: Box<dyn Fn(usize, usize) -> bool> = match claim {
        Claim::NotBisimilar => {
            let class = classes_of(&refs, &u.succs);
            Box::new(move |s, t| class[s] == class[t])
        }
        Claim::LeftDoesNotRefineRight => {
            let sim = greatest_simulation(&refs, &u.succs);
            Box::new(move |s, t| sim[s][t])
        }
        Claim::RightDoesNotRefineLeft => {
            let sim = greatest_simulation(&refs, &u.succs);
            Box::new(move |s, t| sim[s][t])
        }
    };
    let (mover_anchor, answer_anchor) = match claim {
        Claim::RightDoesNotRefineLeft => (anchor_r, anchor_l),
        _ => (anchor_l, anchor_r),
    };
    if related(mover_anchor, answer_anchor) {
        return Err("anchors are related, the claimed distinction does not exist".to_string());
    }

    match &witness.detail {
        WitnessDetail::LabelMismatch {
            left_labels,
            right_labels,
        } => {
            if left_labels == right_labels {
                return Err("label mismatch witness carries equal label sets".to_string());
            }
            if &u.labels[anchor_l] != left_labels || &u.labels[anchor_r] != right_labels {
                return Err("recorded labels do not match the anchors".to_string());
            }
            Ok(())
        }
        WitnessDetail::UnmatchedMove {
            side,
            action,
            successor,
        } => {
            if u.labels[anchor_l] != u.labels[anchor_r] {
                return Err("anchors differ on labels, not on moves".to_string());
            }
            match (claim, side) {
                (Claim::LeftDoesNotRefineRight, Side::Right) => {
                    return Err("a failing left refinement blames a left move".to_string());
                }
                (Claim::RightDoesNotRefineLeft, Side::Left) => {
                    return Err("a failing right refinement blames a right move".to_string());
                }
                _ => {}
            }
            let (mover, answerer) = match side {
                Side::Left => (anchor_l, anchor_r),
                Side::Right => (anchor_r, anchor_l),
            };
            let dst = u.moves[mover]
                .iter()
                .find(|(a, sp)| a == action && &u.tokens[*sp] == successor)
                .map(|&(_, sp)| sp)
                .ok_or_else(|| format!("no move {action} to {successor} exists from the anchor"))?;
            if let Some(&tp) = u.succs[answerer].iter().find(|&&tp| related(dst, tp)) {
                return Err(format!(
                    "the move is answerable: {} stays related to {}",
                    u.tokens[tp], successor
                ));
            }
            Ok(())
        }
    }
}
