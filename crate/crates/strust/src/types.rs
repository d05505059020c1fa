//! Domain identifiers and the interaction event record.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a community member.
///
/// Ids are opaque non-empty tokens. The ordering is numeric-aware: tokens
/// that parse as unsigned integers sort by value and come before everything
/// else, so the integer ids used by the bundled datasets rank "9" ahead of
/// "10" instead of lexicographically after it. Ties between distinct tokens
/// with the same numeric value ("07" vs "7") fall back to the raw string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MemberId(String);

impl MemberId {
    pub fn new(id: impl Into<String>) -> Self {
        MemberId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<u64> {
        self.0.parse().ok()
    }
}

impl Ord for MemberId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for MemberId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for MemberId {
    fn from(s: &str) -> Self {
        MemberId::new(s)
    }
}

/// Identifier of an interaction context (topic of trust).
///
/// The context set of a store is finite and derived from its ledger; the
/// default context is always present and always queryable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContextId(String);

pub const GLOBAL_CONTEXT: &str = "global";

impl ContextId {
    pub fn new(id: impl Into<String>) -> Self {
        ContextId(id.into())
    }

    pub fn global() -> Self {
        ContextId(GLOBAL_CONTEXT.to_string())
    }

    pub fn is_global(&self) -> bool {
        self.0 == GLOBAL_CONTEXT
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Default for ContextId {
    fn default() -> Self {
        ContextId::global()
    }
}

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ContextId {
    fn from(s: &str) -> Self {
        ContextId::new(s)
    }
}

/// Whether an interaction was an initiated contribution (post, reply,
/// message) or a consumption event (read, visit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Active,
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

/// One directed interaction event.
///
/// The source initiated the event and earns engagement credit for it; the
/// target received it and earns popularity credit. A record with weight `w`
/// counts as `w` identical activities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interaction {
    pub source: MemberId,
    pub target: MemberId,
    #[serde(default)]
    pub context: ContextId,
    pub kind: InteractionKind,
    pub polarity: Polarity,
    #[serde(default = "default_weight")]
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

fn default_weight() -> u64 {
    1
}

impl Interaction {
    /// An active, positive, weight-1 event in the global context.
    pub fn new(source: impl Into<MemberId>, target: impl Into<MemberId>) -> Self {
        Interaction {
            source: source.into(),
            target: target.into(),
            context: ContextId::global(),
            kind: InteractionKind::Active,
            polarity: Polarity::Positive,
            weight: 1,
            timestamp: None,
        }
    }

    pub fn in_context(mut self, context: impl Into<ContextId>) -> Self {
        self.context = context.into();
        self
    }

    pub fn with_kind(mut self, kind: InteractionKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn negative(self) -> Self {
        self.with_polarity(Polarity::Negative)
    }

    pub fn with_weight(mut self, weight: u64) -> Self {
        self.weight = weight;
        self
    }

    pub fn at(mut self, timestamp: u64) -> Self {
        self.timestamp = Some(timestamp);
        self
    }

    /// Checks the event invariants: no self-interactions, passive events are
    /// always positive, weight is a positive count.
    pub fn validate(&self) -> Result<()> {
        if self.source == self.target {
            return Err(Error::SelfInteraction(self.source.clone()));
        }
        if self.kind == InteractionKind::Passive && self.polarity == Polarity::Negative {
            return Err(Error::NegativePassive);
        }
        if self.weight == 0 {
            return Err(Error::InvalidWeight(self.weight));
        }
        Ok(())
    }
}

/// Weight blending popularity trust and engagement trust into social trust.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    /// Pure engagement: social trust measures how much the member trusts the
    /// community.
    pub const ENGAGEMENT_ONLY: Alpha = Alpha(0.0);
    /// Pure popularity: social trust reduces to the member's reputation.
    pub const POPULARITY_ONLY: Alpha = Alpha(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha(0.5)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
