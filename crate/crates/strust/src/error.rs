use crate::types::{ContextId, MemberId};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("self-interaction: member `{0}` cannot interact with itself")]
    SelfInteraction(MemberId),
    #[error("passive interactions are always positive; negative passive event rejected")]
    NegativePassive,
    #[error("interaction weight must be a positive count, got {0}")]
    InvalidWeight(u64),
    #[error("unknown member `{0}`")]
    UnknownMember(MemberId),
    #[error("unknown context `{0}`")]
    UnknownContext(ContextId),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("input contains no interaction records")]
    EmptyInput,
    #[error("prior-posters projection needs a usable ordering: timestamps are declared but missing on some posts")]
    MissingOrder,
    #[error("invalid input format: {0}")]
    InvalidFormat(String),
    #[error("k={k} outside valid range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("pair trust needs two distinct members, got `{0}` twice")]
    SamePair(MemberId),
    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("percent must lie strictly between 0 and 100, got {0}")]
    InvalidPercent(f64),
    #[error("invalid removal spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("store decode failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
