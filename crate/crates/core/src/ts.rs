//! Transition systems, in two flavors.
//!
//! A conditional transition system keeps guards and unresolved channel
//! actions on its edges; it is the intermediate form produced by lowering a
//! single graph. An explicit `TransitionSystem` is a plain labeled graph over
//! concrete global states, the form all analyses run on.
//!
//! Explicit systems serialize to a line-oriented text format:
//!
//! ```text
//! ts v1
//! state <id> <token> <label> <label> ...
//! init <id>
//! trans <src> <action> <dst>
//! ```
//!
//! where `<token>` is `{var:val,..};chan:[v,v];..;@decl,decl` and carries the
//! full state identity.

use crate::action::Action;
use crate::error::CoreError;
use crate::eval::{Evaluation, SignatureSet};
use crate::graph::{ChannelDecl, LabelRule, Proposition};
use crate::guard::{Atom, Guard};
use crate::value::TypedValue;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A state of a conditional transition system: the declarator each component
/// sits at plus the merged evaluation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CondState {
    pub decls: Vec<String>,
    pub eval: Evaluation,
}

/// An edge of a conditional transition system. `component` records which
/// leaf component moves, for deterministic scheduling. Channel edges carry
/// the concrete message: the value sent, or the value a receive consumes
/// (the destination evaluation cannot always recover it, since entry pins
/// may overwrite the bound variable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondTransition {
    pub src: usize,
    pub guard: Guard,
    pub action: Action,
    #[serde(default)]
    pub msg: Option<TypedValue>,
    pub dst: usize,
    pub component: usize,
}

/// A conditional transition system over state variables and channel actions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalTs {
    pub name: String,
    pub signatures: SignatureSet,
    pub states: Vec<CondState>,
    pub initial: usize,
    pub transitions: Vec<CondTransition>,
    pub propositions: Vec<Proposition>,
    pub label_rules: Vec<LabelRule>,
    pub atoms: BTreeSet<Atom>,
    /// How many leaf components were interleaved into this system.
    pub leaf_components: usize,
}

impl ConditionalTs {
    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &CondTransition> {
        self.transitions.iter().filter(move |t| t.src == state)
    }

    /// The propositions holding at a state, per the labeling rules.
    pub fn label_state(&self, state: usize) -> Result<BTreeSet<String>, CoreError> {
        let v = &self.states[state].eval;
        let mut out = BTreeSet::new();
        for p in &self.propositions {
            let restrictions: Vec<&LabelRule> = self
                .label_rules
                .iter()
                .filter(|r| r.prop == p.name)
                .collect();
            let mut holds = p.guard.sat(v)?;
            if holds && !restrictions.is_empty() {
                let mut allowed = false;
                for r in restrictions {
                    if r.guard.sat(v)? {
                        allowed = true;
                        break;
                    }
                }
                holds = allowed;
            }
            if holds {
                out.insert(p.name.clone());
            }
        }
        Ok(out)
    }
}

/// A composition of conditional systems communicating over channels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelSystem {
    pub components: Vec<ConditionalTs>,
    pub channels: Vec<ChannelDecl>,
}

impl ChannelSystem {
    pub fn channel(&self, name: &str) -> Option<&ChannelDecl> {
        self.channels.iter().find(|c| c.name == name)
    }
}

/// Full identity of a global state: per-component declarator names, merged
/// evaluation, and channel contents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateKey {
    pub eval: Evaluation,
    pub channels: BTreeMap<String, Vec<TypedValue>>,
    pub decls: Vec<String>,
}

impl StateKey {
    /// Render as a single space-free token.
    pub fn token(&self) -> String {
        let mut out = self.eval.to_string();
        for (name, vals) in &self.channels {
            out.push(';');
            out.push_str(name);
            out.push_str(":[");
            for (i, v) in vals.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&v.to_string());
            }
            out.push(']');
        }
        out.push_str(";@");
        out.push_str(&self.decls.join(","));
        out
    }

    /// Parse a token produced by `token()`.
    pub fn parse(token: &str) -> Result<StateKey, CoreError> {
        let malformed = || CoreError::MalformedToken(token.to_string());
        let mut segments = token.split(';');
        let eval_seg = segments.next().ok_or_else(malformed)?;
        let eval = parse_eval_segment(eval_seg).ok_or_else(malformed)?;
        let mut channels = BTreeMap::new();
        let mut decls = None;
        for seg in segments {
            if let Some(rest) = seg.strip_prefix('@') {
                if decls.is_some() {
                    return Err(malformed());
                }
                decls = Some(if rest.is_empty() {
                    Vec::new()
                } else {
                    rest.split(',').map(str::to_string).collect()
                });
            } else {
                let (name, body) = seg.split_once(":[").ok_or_else(malformed)?;
                let body = body.strip_suffix(']').ok_or_else(malformed)?;
                let vals = if body.is_empty() {
                    Vec::new()
                } else {
                    body.split(',')
                        .map(TypedValue::parse_token)
                        .collect::<Result<Vec<_>, _>>()?
                };
                if channels.insert(name.to_string(), vals).is_some() {
                    return Err(malformed());
                }
            }
        }
        Ok(StateKey {
            eval,
            channels,
            decls: decls.ok_or_else(malformed)?,
        })
    }
}

fn parse_eval_segment(seg: &str) -> Option<Evaluation> {
    let body = seg.strip_prefix('{')?.strip_suffix('}')?;
    if body.is_empty() {
        return Some(Evaluation::empty());
    }
    let mut pairs = Vec::new();
    for item in body.split(',') {
        let (k, v) = item.split_once(':')?;
        let value = TypedValue::parse_token(v).ok()?;
        pairs.push((k.to_string(), value));
    }
    Some(Evaluation::from_pairs(pairs))
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// A concrete occurrence of an action on an explicit edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionInstance {
    Named(String),
    Send { chan: String, value: TypedValue },
    Receive { chan: String, var: String },
}

impl ActionInstance {
    pub fn parse(s: &str) -> Result<ActionInstance, CoreError> {
        if let Some((chan, val)) = s.split_once('!') {
            return Ok(ActionInstance::Send {
                chan: chan.to_string(),
                value: TypedValue::parse_token(val)?,
            });
        }
        if let Some((chan, var)) = s.split_once('?') {
            return Ok(ActionInstance::Receive {
                chan: chan.to_string(),
                var: var.to_string(),
            });
        }
        if s.is_empty() || s.contains(char::is_whitespace) {
            return Err(CoreError::MalformedToken(s.to_string()));
        }
        Ok(ActionInstance::Named(s.to_string()))
    }
}

impl fmt::Display for ActionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionInstance::Named(name) => write!(f, "{name}"),
            ActionInstance::Send { chan, value } => write!(f, "{chan}!{value}"),
            ActionInstance::Receive { chan, var } => write!(f, "{chan}?{var}"),
        }
    }
}

/// A state of an explicit transition system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TsState {
    pub key: StateKey,
    pub labels: BTreeSet<String>,
}

/// An explicit edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TsTransition {
    pub src: usize,
    pub action: ActionInstance,
    pub dst: usize,
}

/// An explicit transition system: the common input of the equivalence and
/// verification algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionSystem {
    pub states: Vec<TsState>,
    pub initials: BTreeSet<usize>,
    pub transitions: Vec<TsTransition>,
    pub atomic_propositions: BTreeSet<String>,
    /// Set when exploration stopped at a configured limit.
    pub truncated: bool,
}

impl TransitionSystem {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn labels(&self, state: usize) -> &BTreeSet<String> {
        &self.states[state].labels
    }

    /// Successor state ids per state, deduplicated and sorted.
    pub fn succ_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![BTreeSet::new(); self.states.len()];
        for t in &self.transitions {
            out[t.src].insert(t.dst);
        }
        out.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Predecessor state ids per state, deduplicated and sorted.
    pub fn pred_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![BTreeSet::new(); self.states.len()];
        for t in &self.transitions {
            out[t.dst].insert(t.src);
        }
        out.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Edges grouped by source, in stored order.
    pub fn edge_lists(&self) -> Vec<Vec<&TsTransition>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for t in &self.transitions {
            out[t.src].push(t);
        }
        out
    }

    /// States with no outgoing transitions.
    pub fn terminal_states(&self) -> Vec<usize> {
        let succs = self.succ_lists();
        (0..self.states.len())
            .filter(|&i| succs[i].is_empty())
            .collect()
    }

    /// Index integrity: every edge and initial refers to a real state.
    pub fn check_indices(&self) -> Result<(), CoreError> {
        let n = self.states.len();
        for &i in &self.initials {
            if i >= n {
                return Err(CoreError::Invalid(format!("initial {i} out of range")));
            }
        }
        for t in &self.transitions {
            if t.src >= n || t.dst >= n {
                return Err(CoreError::Invalid(format!(
                    "transition {} -> {} out of range",
                    t.src, t.dst
                )));
            }
        }
        Ok(())
    }

    /// Canonical order for the edge list: by source, action text, target.
    pub fn sort_transitions(&mut self) {
        self.transitions
            .sort_by_key(|a| (a.src, a.action.to_string(), a.dst));
    }

    /// Serialize to the `ts v1` text format.
    pub fn dump(&self) -> String {
        let mut out = String::from("ts v1\n");
        for (i, s) in self.states.iter().enumerate() {
            out.push_str(&format!("state {} {}", i, s.key.token()));
            for l in &s.labels {
                out.push(' ');
                out.push_str(l);
            }
            out.push('\n');
        }
        for i in &self.initials {
            out.push_str(&format!("init {i}\n"));
        }
        let mut edges: Vec<&TsTransition> = self.transitions.iter().collect();
        edges.sort_by_key(|t| (t.src, t.action.to_string(), t.dst));
        for t in edges {
            out.push_str(&format!("trans {} {} {}\n", t.src, t.action, t.dst));
        }
        out
    }

    /// Parse the `ts v1` text format.
    pub fn parse(text: &str) -> Result<TransitionSystem, CoreError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| CoreError::MalformedToken("empty dump".to_string()))?;
        if header.trim() != "ts v1" {
            return Err(CoreError::MalformedToken(format!("bad header: {header:?}")));
        }
        let mut states: Vec<TsState> = Vec::new();
        let mut initials = BTreeSet::new();
        let mut transitions = Vec::new();
        let mut atomic_propositions = BTreeSet::new();
        let bad =
            |n: usize, line: &str| CoreError::MalformedToken(format!("line {}: {line}", n + 1));
        for (n, line) in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(' ');
            match parts.next() {
                Some("state") => {
                    let id: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad(n, line))?;
                    if id != states.len() {
                        return Err(CoreError::MalformedToken(format!(
                            "state ids must be dense and ordered; got {id} at position {}",
                            states.len()
                        )));
                    }
                    let token = parts.next().ok_or_else(|| bad(n, line))?;
                    let key = StateKey::parse(token)?;
                    let labels: BTreeSet<String> = parts.map(str::to_string).collect();
                    atomic_propositions.extend(labels.iter().cloned());
                    states.push(TsState { key, labels });
                }
                Some("init") => {
                    let id: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad(n, line))?;
                    initials.insert(id);
                }
                Some("trans") => {
                    let src: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad(n, line))?;
                    let action = ActionInstance::parse(parts.next().ok_or_else(|| bad(n, line))?)?;
                    let dst: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad(n, line))?;
                    transitions.push(TsTransition { src, action, dst });
                }
                _ => return Err(bad(n, line)),
            }
        }
        let ts = TransitionSystem {
            states,
            initials,
            transitions,
            atomic_propositions,
            truncated: false,
        };
        ts.check_indices()?;
        Ok(ts)
    }
}
