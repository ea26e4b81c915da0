//! Typed values and their (finite) kinds.

use serde::{Deserialize, Serialize};
use std::fmt;

/// The kind of a state variable or channel domain. Every kind denotes a
/// finite, enumerable set of values, which keeps state spaces finite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ValueKind {
    Bool,
    Int { lo: i64, hi: i64 },
    Sym { enumerants: Vec<String> },
}

/// A single runtime value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TypedValue {
    Bool(bool),
    Int(i64),
    Sym(String),
}

impl ValueKind {
    pub fn int(lo: i64, hi: i64) -> Self {
        debug_assert!(lo <= hi);
        ValueKind::Int { lo, hi }
    }

    pub fn sym<S: Into<String>>(enumerants: Vec<S>) -> Self {
        ValueKind::Sym {
            enumerants: enumerants.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            ValueKind::Bool => true,
            ValueKind::Int { lo, hi } => lo <= hi,
            ValueKind::Sym { enumerants } => {
                !enumerants.is_empty() && {
                    let mut seen = std::collections::BTreeSet::new();
                    enumerants.iter().all(|e| seen.insert(e))
                }
            }
        }
    }

    /// Does a value belong to this kind's domain?
    pub fn admits(&self, v: &TypedValue) -> bool {
        match (self, v) {
            (ValueKind::Bool, TypedValue::Bool(_)) => true,
            (ValueKind::Int { lo, hi }, TypedValue::Int(n)) => lo <= n && n <= hi,
            (ValueKind::Sym { enumerants }, TypedValue::Sym(s)) => enumerants.contains(s),
            _ => false,
        }
    }

    /// The default value a variable of this kind takes when nothing pins it:
    /// false, the low end of the range, or the first enumerant. For integer
    /// ranges containing 0 the default is 0.
    pub fn default_value(&self) -> TypedValue {
        match self {
            ValueKind::Bool => TypedValue::Bool(false),
            ValueKind::Int { lo, hi } => {
                if *lo <= 0 && 0 <= *hi {
                    TypedValue::Int(0)
                } else {
                    TypedValue::Int(*lo)
                }
            }
            ValueKind::Sym { enumerants } => TypedValue::Sym(enumerants[0].clone()),
        }
    }

    /// Every value of the domain, in a fixed order.
    pub fn values(&self) -> Vec<TypedValue> {
        match self {
            ValueKind::Bool => vec![TypedValue::Bool(false), TypedValue::Bool(true)],
            ValueKind::Int { lo, hi } => (*lo..=*hi).map(TypedValue::Int).collect(),
            ValueKind::Sym { enumerants } => {
                enumerants.iter().cloned().map(TypedValue::Sym).collect()
            }
        }
    }

    pub fn domain_size(&self) -> usize {
        match self {
            ValueKind::Bool => 2,
            ValueKind::Int { lo, hi } => (hi - lo + 1) as usize,
            ValueKind::Sym { enumerants } => enumerants.len(),
        }
    }

    /// Domain subsumption: every value of `other` is admitted by `self`.
    pub fn contains(&self, other: &ValueKind) -> bool {
        match (self, other) {
            (ValueKind::Bool, ValueKind::Bool) => true,
            (ValueKind::Int { lo: a, hi: b }, ValueKind::Int { lo: c, hi: d }) => a <= c && d <= b,
            (ValueKind::Sym { enumerants: big }, ValueKind::Sym { enumerants: small }) => {
                small.iter().all(|e| big.contains(e))
            }
            _ => false,
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            ValueKind::Bool => "bool",
            ValueKind::Int { .. } => "int",
            ValueKind::Sym { .. } => "sym",
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueKind::Bool => write!(f, "bool"),
            ValueKind::Int { lo, hi } => write!(f, "int[{lo}..{hi}]"),
            ValueKind::Sym { enumerants } => write!(f, "sym[{}]", enumerants.join(",")),
        }
    }
}

impl TypedValue {
    /// Parse the textual form produced by `Display`: `true`/`false`, a signed
    /// integer, or otherwise a symbol.
    pub fn parse_token(s: &str) -> Result<TypedValue, crate::error::CoreError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(crate::error::CoreError::MalformedToken(
                "empty value".to_string(),
            ));
        }
        match s {
            "true" => return Ok(TypedValue::Bool(true)),
            "false" => return Ok(TypedValue::Bool(false)),
            _ => {}
        }
        if s.chars()
            .next()
            .is_some_and(|c| c == '-' || c.is_ascii_digit())
        {
            return s
                .parse::<i64>()
                .map(TypedValue::Int)
                .map_err(|_| crate::error::CoreError::MalformedToken(s.to_string()));
        }
        if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(TypedValue::Sym(s.to_string()))
        } else {
            Err(crate::error::CoreError::MalformedToken(s.to_string()))
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            TypedValue::Bool(_) => "bool",
            TypedValue::Int(_) => "int",
            TypedValue::Sym(_) => "sym",
        }
    }
}

impl fmt::Display for TypedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypedValue::Bool(b) => write!(f, "{b}"),
            TypedValue::Int(n) => write!(f, "{n}"),
            TypedValue::Sym(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_kind_admits_range_only() {
        let k = ValueKind::int(0, 4);
        assert!(k.admits(&TypedValue::Int(0)));
        assert!(k.admits(&TypedValue::Int(4)));
        assert!(!k.admits(&TypedValue::Int(5)));
        assert!(!k.admits(&TypedValue::Bool(true)));
    }

    #[test]
    fn defaults_per_kind() {
        assert_eq!(ValueKind::Bool.default_value(), TypedValue::Bool(false));
        assert_eq!(ValueKind::int(0, 4).default_value(), TypedValue::Int(0));
        assert_eq!(ValueKind::int(-3, 3).default_value(), TypedValue::Int(0));
        assert_eq!(ValueKind::int(2, 5).default_value(), TypedValue::Int(2));
        assert_eq!(
            ValueKind::sym(vec!["idle", "busy"]).default_value(),
            TypedValue::Sym("idle".into())
        );
    }

    #[test]
    fn enumeration_is_complete_and_ordered() {
        let k = ValueKind::int(1, 3);
        assert_eq!(
            k.values(),
            vec![TypedValue::Int(1), TypedValue::Int(2), TypedValue::Int(3)]
        );
        assert_eq!(k.domain_size(), 3);
    }

    #[test]
    fn subsumption_on_ranges_and_enums() {
        assert!(ValueKind::int(0, 9).contains(&ValueKind::int(2, 5)));
        assert!(!ValueKind::int(2, 5).contains(&ValueKind::int(0, 9)));
        assert!(ValueKind::sym(vec!["a", "b", "c"]).contains(&ValueKind::sym(vec!["b"])));
        assert!(!ValueKind::Bool.contains(&ValueKind::int(0, 1)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(ValueKind::int(0, 4).to_string(), "int[0..4]");
        assert_eq!(ValueKind::sym(vec!["a", "b"]).to_string(), "sym[a,b]");
        assert_eq!(TypedValue::Bool(true).to_string(), "true");
        assert_eq!(TypedValue::Int(-2).to_string(), "-2");
    }

    #[test]
    fn parse_token_round_trips_display() {
        for v in [
            TypedValue::Bool(true),
            TypedValue::Bool(false),
            TypedValue::Int(0),
            TypedValue::Int(-17),
            TypedValue::Sym("idle".into()),
        ] {
            assert_eq!(TypedValue::parse_token(&v.to_string()).unwrap(), v);
        }
        assert!(TypedValue::parse_token("").is_err());
        assert!(TypedValue::parse_token("3x").is_err());
        assert!(TypedValue::parse_token("a b").is_err());
    }
}
