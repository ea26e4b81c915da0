//! Variable signatures and evaluations.
//!
//! An evaluation is a finite map from variable names to typed values. The
//! operations here are total functions returning fresh values; nothing is
//! mutated in place.

use crate::error::CoreError;
use crate::value::{TypedValue, ValueKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Declaration of one state variable: its name, kind, and optional explicit
/// default. When no default is given the kind's own default applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSignature {
    pub name: String,
    pub kind: ValueKind,
    pub default: Option<TypedValue>,
}

impl VarSignature {
    pub fn new<S: Into<String>>(name: S, kind: ValueKind) -> Self {
        VarSignature {
            name: name.into(),
            kind,
            default: None,
        }
    }

    pub fn with_default<S: Into<String>>(name: S, kind: ValueKind, default: TypedValue) -> Self {
        VarSignature {
            name: name.into(),
            kind,
            default: Some(default),
        }
    }

    pub fn default_value(&self) -> TypedValue {
        self.default
            .clone()
            .unwrap_or_else(|| self.kind.default_value())
    }
}

/// An ordered set of variable declarations with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignatureSet {
    vars: Vec<VarSignature>,
}

impl SignatureSet {
    pub fn new(vars: Vec<VarSignature>) -> Result<Self, CoreError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.name.clone()) {
                return Err(CoreError::DuplicateVariable(v.name.clone()));
            }
            if !v.kind.is_well_formed() {
                return Err(CoreError::Invalid(format!(
                    "malformed kind for variable {}",
                    v.name
                )));
            }
            if let Some(d) = &v.default {
                if !v.kind.admits(d) {
                    return Err(CoreError::Invalid(format!(
                        "default value {d} outside the domain of variable {}",
                        v.name
                    )));
                }
            }
        }
        Ok(SignatureSet { vars })
    }

    pub fn vars(&self) -> &[VarSignature] {
        &self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&VarSignature> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.name.as_str())
    }

    /// The evaluation assigning every variable its default.
    pub fn default_evaluation(&self) -> Evaluation {
        Evaluation {
            map: self
                .vars
                .iter()
                .map(|v| (v.name.clone(), v.default_value()))
                .collect(),
        }
    }

    /// All total evaluations over this signature, in lexicographic order of
    /// the per-variable value enumerations. Only usable for small signatures.
    pub fn enumerate(&self) -> Vec<Evaluation> {
        let mut out = vec![Evaluation::empty()];
        for v in &self.vars {
            let mut next = Vec::with_capacity(out.len() * v.kind.domain_size());
            for partial in &out {
                for val in v.kind.values() {
                    let mut m = partial.map.clone();
                    m.insert(v.name.clone(), val);
                    next.push(Evaluation { map: m });
                }
            }
            out = next;
        }
        out
    }

    /// Union of two signature sets; shared names must agree exactly.
    pub fn union(&self, other: &SignatureSet) -> Result<SignatureSet, CoreError> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            match self.get(&v.name) {
                None => vars.push(v.clone()),
                Some(mine) if mine == v => {}
                Some(_) => {
                    return Err(CoreError::Invalid(format!(
                        "variable {} declared with conflicting signatures",
                        v.name
                    )))
                }
            }
        }
        SignatureSet::new(vars)
    }
}

/// A finite map from variable names to values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Hash, Serialize, Deserialize)]
pub struct Evaluation {
    map: BTreeMap<String, TypedValue>,
}

impl Evaluation {
    pub fn empty() -> Self {
        Evaluation {
            map: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, TypedValue)>,
        S: Into<String>,
    {
        Evaluation {
            map: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<&TypedValue> {
        self.map.get(var)
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.map.contains_key(var)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &TypedValue)> {
        self.map.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.map.keys()
    }

    /// Point update: reassign one already-present variable, checked against
    /// the signature for both presence and domain membership.
    pub fn update(
        &self,
        sigs: &SignatureSet,
        var: &str,
        value: TypedValue,
    ) -> Result<Evaluation, CoreError> {
        let sig = sigs
            .get(var)
            .ok_or_else(|| CoreError::UnknownVariable(var.to_string()))?;
        if !self.map.contains_key(var) {
            return Err(CoreError::UnknownVariable(var.to_string()));
        }
        if !sig.kind.admits(&value) {
            return Err(CoreError::KindMismatch {
                var: var.to_string(),
                expected: sig.kind.to_string(),
                got: value.to_string(),
            });
        }
        let mut map = self.map.clone();
        map.insert(var.to_string(), value);
        Ok(Evaluation { map })
    }

    /// Unchecked insert, for building evaluations whose signature is implied
    /// by construction.
    pub fn with(&self, var: &str, value: TypedValue) -> Evaluation {
        let mut map = self.map.clone();
        map.insert(var.to_string(), value);
        Evaluation { map }
    }

    /// Keep only the variables named in `keep`.
    pub fn restrict<'a, I: IntoIterator<Item = &'a str>>(&self, keep: I) -> Evaluation {
        let keep: std::collections::BTreeSet<&str> = keep.into_iter().collect();
        Evaluation {
            map: self
                .map
                .iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Does this evaluation assign every variable of the signature set?
    pub fn is_total_over(&self, sigs: &SignatureSet) -> bool {
        sigs.vars().iter().all(|v| self.map.contains_key(&v.name))
    }

    /// Every assignment lies inside its declared domain and names a declared
    /// variable.
    pub fn well_typed(&self, sigs: &SignatureSet) -> Result<(), CoreError> {
        for (k, v) in &self.map {
            let sig = sigs
                .get(k)
                .ok_or_else(|| CoreError::UnknownVariable(k.clone()))?;
            if !sig.kind.admits(v) {
                return Err(CoreError::KindMismatch {
                    var: k.clone(),
                    expected: sig.kind.to_string(),
                    got: v.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}:{v}")?;
        }
        write!(f, "}}")
    }
}

/// Disjoint union of evaluations. Any shared variable name is an error, even
/// when both sides agree on its value.
pub fn eval_merge(parts: &[Evaluation]) -> Result<Evaluation, CoreError> {
    let mut map: BTreeMap<String, TypedValue> = BTreeMap::new();
    for part in parts {
        for (k, v) in &part.map {
            if map.contains_key(k) {
                return Err(CoreError::Overlap(k.clone()));
            }
            map.insert(k.clone(), v.clone());
        }
    }
    Ok(Evaluation { map })
}

/// Override: the partial evaluation wins wherever it assigns; the base fills
/// in everything else.
pub fn eval_override(base: &Evaluation, partial: &Evaluation) -> Evaluation {
    let mut map = base.map.clone();
    for (k, v) in &partial.map {
        map.insert(k.clone(), v.clone());
    }
    Evaluation { map }
}
