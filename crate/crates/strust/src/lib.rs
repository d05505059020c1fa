//! Social trust analytics over interaction ledgers.
//!
//! The crate models a community as an immutable ledger of directed
//! interaction events and derives three trust views from it:
//!
//! * popularity trust — beta-mean trust over what a member receives,
//! * engagement trust — beta-mean trust over what a member initiates,
//! * social trust — their convex combination, per member and per community.
//!
//! On top of the trust engine sit rankings and role recommendation
//! ([`recommend`]: leaders by popularity, mentors by engagement) and
//! member-removal sustainability experiments ([`sustain`]). Dataset
//! ingestion ([`ingest`]) covers directed edge lists and bipartite post logs
//! projected onto user->user interactions.

pub mod error;
pub mod ingest;
pub mod recommend;
pub mod store;
pub mod sustain;
pub mod trust;
pub mod types;

pub use error::{Error, Result};
pub use ingest::{
    ingest_edge_list, project_bipartite, Delimiter, FormatSpec, Ingested, MalformedPolicy,
    ProjectionRule, SkippedLine,
};
pub use recommend::{
    ego_network, order_entries, percent_to_count, rank, recommend_leaders, recommend_mentors,
    topk_overlap, unique_eliminations, EgoMode, OverlapPoint, RankEntry, RankKind, Ranking,
    UniqueEliminations,
};
pub use store::{InteractionStore, PairCounts, SocialCapital, StoreBuilder, StoreMetadata};
pub use sustain::{
    capital_drop_check, gap_curve, incident_positive_interactions, remove_members, run_removal,
    RemovalReport, RemovalSpec, DEFAULT_PERCENTS,
};
pub use trust::{
    beta_mean, CommunityTrust, ContextAggregation, PairTrust, TrustEngine, TrustScore,
    BOOTSTRAP_TRUST,
};
pub use types::{
    Alpha, ContextId, Interaction, InteractionKind, MemberId, Polarity, GLOBAL_CONTEXT,
};
