//! The single-step natural-logic calculus.
//!
//! A context `f` is either upward monotone (order preserving) or downward
//! monotone (order reversing) with respect to concept inclusion. Together
//! with the relation between the two insertions `X` and `Y`, the context's
//! monotonicity fixes whether `f(X)` entails `f(Y)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Direction of a context with respect to concept inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Up,
    Down,
}

/// Relation between the two insertions of a pair.
///
/// `ForwardInclusion` means `X ⊑ Y` (X is the more specific concept, as in
/// `(raspberries, fruit)`); `ReverseInclusion` means `X ⊒ Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConceptRelation {
    #[serde(rename = "=")]
    Equivalence,
    #[serde(rename = "sub")]
    ForwardInclusion,
    #[serde(rename = "sup")]
    ReverseInclusion,
    #[serde(rename = "none")]
    NoRelation,
}

/// Two-class NLI label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntailmentLabel {
    #[serde(rename = "entailment")]
    Entailment,
    #[serde(rename = "non-entailment")]
    NonEntailment,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} value {value:?}")]
pub struct ParseLabelError {
    pub kind: &'static str,
    pub value: String,
}

impl Monotonicity {
    pub const ALL: [Monotonicity; 2] = [Monotonicity::Up, Monotonicity::Down];

    pub fn as_str(self) -> &'static str {
        match self {
            Monotonicity::Up => "up",
            Monotonicity::Down => "down",
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Monotonicity::Up => Monotonicity::Down,
            Monotonicity::Down => Monotonicity::Up,
        }
    }
}

impl ConceptRelation {
    pub const ALL: [ConceptRelation; 4] = [
        ConceptRelation::Equivalence,
        ConceptRelation::ForwardInclusion,
        ConceptRelation::ReverseInclusion,
        ConceptRelation::NoRelation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConceptRelation::Equivalence => "=",
            ConceptRelation::ForwardInclusion => "sub",
            ConceptRelation::ReverseInclusion => "sup",
            ConceptRelation::NoRelation => "none",
        }
    }

    /// Reads the relation with `Y` and `X` swapped.
    pub fn flip(self) -> Self {
        match self {
            ConceptRelation::ForwardInclusion => ConceptRelation::ReverseInclusion,
            ConceptRelation::ReverseInclusion => ConceptRelation::ForwardInclusion,
            other => other,
        }
    }
}

impl EntailmentLabel {
    pub const ALL: [EntailmentLabel; 2] = [EntailmentLabel::Entailment, EntailmentLabel::NonEntailment];

    pub fn as_str(self) -> &'static str {
        match self {
            EntailmentLabel::Entailment => "entailment",
            EntailmentLabel::NonEntailment => "non-entailment",
        }
    }
}

/// Free-function form of [`ConceptRelation::flip`].
pub fn flip(rel: ConceptRelation) -> ConceptRelation {
    rel.flip()
}

/// Gold label of `(f(X), f(Y))` for a context of monotonicity `mon` and an
/// insertion pair standing in relation `rel`.
pub fn compose(mon: Monotonicity, rel: ConceptRelation) -> EntailmentLabel {
    use ConceptRelation::*;
    let entails = matches!(
        (mon, rel),
        (_, Equivalence) | (Monotonicity::Up, ForwardInclusion) | (Monotonicity::Down, ReverseInclusion)
    );
    if entails {
        EntailmentLabel::Entailment
    } else {
        EntailmentLabel::NonEntailment
    }
}

macro_rules! str_impls {
    ($ty:ty, $kind:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.pad(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = ParseLabelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| ParseLabelError { kind: $kind, value: s.to_string() })
            }
        }
    };
}

str_impls!(Monotonicity, "monotonicity");
str_impls!(ConceptRelation, "relation");
str_impls!(EntailmentLabel, "entailment label");
