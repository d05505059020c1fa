//! The interaction ledger and its directed count tables.
//!
//! A store is built once (single writer), then immutable: every query is a
//! pure read and the store can be shared freely across threads. Each ledger
//! entry feeds two views of the same event — engagement counts for the
//! source and popularity counts for the target — so the two count tables can
//! never disagree.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{ContextId, Interaction, MemberId, Polarity};

/// Positive/negative activity counts for one directed member pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub positive: u64,
    pub negative: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.positive + self.negative
    }
}

/// Social capital of a community: how many positive interactions it holds
/// (weights expanded) and how many distinct ordered pairs they cover.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocialCapital {
    pub total: u64,
    pub unique: u64,
}

/// Provenance carried by a store and echoed into every derived report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StoreMetadata {
    #[serde(default)]
    pub source_file: String,
    #[serde(default)]
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection_rule: Option<String>,
    #[serde(default)]
    pub tool_version: String,
    #[serde(default)]
    pub input_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
}

/// ctx -> keyed member -> counterpart -> counts
type CountTable = BTreeMap<ContextId, BTreeMap<MemberId, BTreeMap<MemberId, PairCounts>>>;

/// Immutable ledger of interactions plus the member set M and context set X.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionStore {
    members: BTreeSet<MemberId>,
    contexts: BTreeSet<ContextId>,
    default_context: ContextId,
    ledger: Vec<Interaction>,
    // Two views of the single ledger, updated together at build time:
    // `received` keys by the event target, `initiated` by the event source.
    received: CountTable,
    initiated: CountTable,
    metadata: StoreMetadata,
}

/// Accumulates members and events, then freezes them into a store.
#[derive(Debug, Clone)]
pub struct StoreBuilder {
    members: BTreeSet<MemberId>,
    default_context: ContextId,
    ledger: Vec<Interaction>,
    metadata: StoreMetadata,
}

impl Default for StoreBuilder {
    fn default() -> Self {
        StoreBuilder::new()
    }
}

impl StoreBuilder {
    pub fn new() -> Self {
        StoreBuilder {
            members: BTreeSet::new(),
            default_context: ContextId::global(),
            ledger: Vec::new(),
            metadata: StoreMetadata::default(),
        }
    }

    /// Sets the context events land in when the input declares none.
    pub fn default_context(mut self, context: impl Into<ContextId>) -> Self {
        self.default_context = context.into();
        self
    }

    /// Registers a member even if it never appears in the ledger.
    pub fn add_member(&mut self, member: impl Into<MemberId>) {
        self.members.insert(member.into());
    }

    /// Appends one event after checking its invariants.
    pub fn add_interaction(&mut self, event: Interaction) -> Result<()> {
        event.validate()?;
        self.members.insert(event.source.clone());
        self.members.insert(event.target.clone());
        self.ledger.push(event);
        Ok(())
    }

    pub fn set_metadata(&mut self, metadata: StoreMetadata) {
        self.metadata = metadata;
    }

    pub fn build(self) -> InteractionStore {
        let mut contexts: BTreeSet<ContextId> =
            self.ledger.iter().map(|e| e.context.clone()).collect();
        contexts.insert(self.default_context.clone());

        let mut received: CountTable = BTreeMap::new();
        let mut initiated: CountTable = BTreeMap::new();
        for event in &self.ledger {
            let rec = received
                .entry(event.context.clone())
                .or_default()
                .entry(event.target.clone())
                .or_default()
                .entry(event.source.clone())
                .or_default();
            match event.polarity {
                Polarity::Positive => rec.positive += event.weight,
                Polarity::Negative => rec.negative += event.weight,
            }
            let ini = initiated
                .entry(event.context.clone())
                .or_default()
                .entry(event.source.clone())
                .or_default()
                .entry(event.target.clone())
                .or_default();
            match event.polarity {
                Polarity::Positive => ini.positive += event.weight,
                Polarity::Negative => ini.negative += event.weight,
            }
        }

        InteractionStore {
            members: self.members,
            contexts,
            default_context: self.default_context,
            ledger: self.ledger,
            received,
            initiated,
            metadata: self.metadata,
        }
    }
}

impl InteractionStore {
    pub fn builder() -> StoreBuilder {
        StoreBuilder::new()
    }

    /// An empty store over the given members (no interactions yet).
    pub fn with_members<I, M>(members: I) -> Self
    where
        I: IntoIterator<Item = M>,
        M: Into<MemberId>,
    {
        let mut b = StoreBuilder::new();
        for m in members {
            b.add_member(m);
        }
        b.build()
    }

    pub fn members(&self) -> &BTreeSet<MemberId> {
        &self.members
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn contains_member(&self, member: &MemberId) -> bool {
        self.members.contains(member)
    }

    pub fn contexts(&self) -> &BTreeSet<ContextId> {
        &self.contexts
    }

    pub fn default_context(&self) -> &ContextId {
        &self.default_context
    }

    pub fn ledger(&self) -> &[Interaction] {
        &self.ledger
    }

    pub fn metadata(&self) -> &StoreMetadata {
        &self.metadata
    }

    pub fn set_metadata(&mut self, metadata: StoreMetadata) {
        self.metadata = metadata;
    }

    /// Value-semantics append: returns a new store whose ledger includes the
    /// event, leaving `self` untouched.
    pub fn with_interaction(&self, event: Interaction) -> Result<InteractionStore> {
        event.validate()?;
        let mut builder = self.to_builder();
        builder.add_interaction(event)?;
        Ok(builder.build())
    }

    fn to_builder(&self) -> StoreBuilder {
        let mut builder = StoreBuilder::new().default_context(self.default_context.clone());
        builder.members = self.members.clone();
        builder.ledger = self.ledger.clone();
        builder.metadata = self.metadata.clone();
        builder
    }

    fn check_member(&self, member: &MemberId) -> Result<()> {
        if self.contains_member(member) {
            Ok(())
        } else {
            Err(Error::UnknownMember(member.clone()))
        }
    }

    fn check_context(&self, context: &ContextId) -> Result<()> {
        if self.contexts.contains(context) || context.is_global() {
            Ok(())
        } else {
            Err(Error::UnknownContext(context.clone()))
        }
    }

    /// Positive/negative counts of events `initiator -> receiver` in one
    /// context, weights expanded. The same numbers serve as the receiver's
    /// popularity counts and the initiator's engagement counts.
    pub fn directed_counts(
        &self,
        receiver: &MemberId,
        initiator: &MemberId,
        context: &ContextId,
    ) -> Result<PairCounts> {
        self.check_member(receiver)?;
        self.check_member(initiator)?;
        self.check_context(context)?;
        Ok(self.counts_unchecked(receiver, initiator, context))
    }

    pub(crate) fn counts_unchecked(
        &self,
        receiver: &MemberId,
        initiator: &MemberId,
        context: &ContextId,
    ) -> PairCounts {
        self.received
            .get(context)
            .and_then(|by_recv| by_recv.get(receiver))
            .and_then(|by_init| by_init.get(initiator))
            .copied()
            .unwrap_or_default()
    }

    /// Counterparts that sent events to `member` in `context`, with counts.
    pub(crate) fn received_by(
        &self,
        member: &MemberId,
        context: &ContextId,
    ) -> Option<&BTreeMap<MemberId, PairCounts>> {
        self.received.get(context).and_then(|m| m.get(member))
    }

    /// Counterparts that `member` sent events to in `context`, with counts.
    pub(crate) fn initiated_by(
        &self,
        member: &MemberId,
        context: &ContextId,
    ) -> Option<&BTreeMap<MemberId, PairCounts>> {
        self.initiated.get(context).and_then(|m| m.get(member))
    }

    /// Total positive interactions (weights expanded) and distinct ordered
    /// pairs with at least one positive interaction, across all contexts.
    pub fn social_capital(&self) -> SocialCapital {
        let mut total = 0u64;
        let mut unique: BTreeSet<(&MemberId, &MemberId)> = BTreeSet::new();
        for event in &self.ledger {
            if event.polarity == Polarity::Positive {
                total += event.weight;
                unique.insert((&event.source, &event.target));
            }
        }
        SocialCapital {
            total,
            unique: unique.len() as u64,
        }
    }

    /// Returns a store without the given members and without every event
    /// incident to any of them. Surviving members are retained even if the
    /// removal leaves them isolated.
    pub fn without_members(&self, remove: &BTreeSet<MemberId>) -> Result<InteractionStore> {
        for member in remove {
            self.check_member(member)?;
        }
        let mut builder = StoreBuilder::new().default_context(self.default_context.clone());
        for member in &self.members {
            if !remove.contains(member) {
                builder.add_member(member.clone());
            }
        }
        for event in &self.ledger {
            if !remove.contains(&event.source) && !remove.contains(&event.target) {
                builder.add_interaction(event.clone())?;
            }
        }
        builder.set_metadata(self.metadata.clone());
        Ok(builder.build())
    }

    /// Canonical JSON: sorted members and contexts, ledger in insertion
    /// order, metadata block last. Identical stores serialize to identical
    /// bytes.
    pub fn to_canonical_json(&self) -> String {
        let file = StoreFile::from(self);
        let mut out = serde_json::to_string_pretty(&file).expect("store serialization");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<InteractionStore> {
        let file: StoreFile = serde_json::from_str(text)?;
        file.into_store()
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_canonical_json())?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<InteractionStore> {
        let text = fs::read_to_string(path)?;
        InteractionStore::from_json(&text)
    }
}

/// Serialized shape of a store.
#[derive(Debug, Serialize, Deserialize)]
struct StoreFile {
    members: Vec<MemberId>,
    contexts: Vec<ContextId>,
    #[serde(default)]
    default_context: ContextId,
    ledger: Vec<Interaction>,
    #[serde(default)]
    metadata: StoreMetadata,
}

impl From<&InteractionStore> for StoreFile {
    fn from(store: &InteractionStore) -> Self {
        StoreFile {
            members: store.members.iter().cloned().collect(),
            contexts: store.contexts.iter().cloned().collect(),
            default_context: store.default_context.clone(),
            ledger: store.ledger.clone(),
            metadata: store.metadata.clone(),
        }
    }
}

impl StoreFile {
    fn into_store(self) -> Result<InteractionStore> {
        let mut builder = StoreBuilder::new().default_context(self.default_context);
        for member in self.members {
            builder.add_member(member);
        }
        for event in self.ledger {
            builder.add_interaction(event)?;
        }
        builder.set_metadata(self.metadata);
        Ok(builder.build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::InteractionKind;

    /// Members {A,B,C} with B->A twice and C->A once, all positive.
    pub(crate) fn three_member_store() -> InteractionStore {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("C", "A")).unwrap();
        b.build()
    }

    #[test]
    fn construction_from_empty() {
        let store = InteractionStore::builder().build();
        let store = store.with_interaction(Interaction::new("B", "A")).unwrap();
        assert_eq!(store.member_count(), 2);
        assert_eq!(store.ledger().len(), 1);
        assert!(store.contains_member(&MemberId::new("A")));
        assert!(store.contains_member(&MemberId::new("B")));
    }

    #[test]
    fn with_interaction_leaves_original_unchanged() {
        let store = three_member_store();
        let bigger = store.with_interaction(Interaction::new("A", "B")).unwrap();
        assert_eq!(store.ledger().len(), 3);
        assert_eq!(bigger.ledger().len(), 4);
    }

    #[test]
    fn self_interaction_rejected_by_store() {
        let store = three_member_store();
        let err = store.with_interaction(Interaction::new("A", "A")).unwrap_err();
        assert!(matches!(err, Error::SelfInteraction(_)));
    }

    #[test]
    fn directed_counts_on_three_member_example() {
        let store = three_member_store();
        let a = MemberId::new("A");
        let b = MemberId::new("B");
        let g = ContextId::global();
        let counts = store.directed_counts(&a, &b, &g).unwrap();
        assert_eq!(counts, PairCounts { positive: 2, negative: 0 });
        // no events A -> B
        let counts = store.directed_counts(&b, &a, &g).unwrap();
        assert_eq!(counts, PairCounts { positive: 0, negative: 0 });
    }

    #[test]
    fn weight_expansion_in_counts() {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A").with_weight(3)).unwrap();
        let store = b.build();
        let counts = store
            .directed_counts(&MemberId::new("A"), &MemberId::new("B"), &ContextId::global())
            .unwrap();
        assert_eq!(counts.positive, 3);
    }

    #[test]
    fn unknown_member_and_context_errors() {
        let store = three_member_store();
        let a = MemberId::new("A");
        let z = MemberId::new("Z");
        let g = ContextId::global();
        assert!(matches!(
            store.directed_counts(&z, &a, &g),
            Err(Error::UnknownMember(_))
        ));
        assert!(matches!(
            store.directed_counts(&a, &a, &ContextId::new("movies")),
            Err(Error::UnknownContext(_))
        ));
        // the global context is always queryable
        assert!(store.directed_counts(&a, &MemberId::new("B"), &g).is_ok());
    }

    #[test]
    fn single_ledger_duality() {
        // engagement counts of the source equal popularity counts of the
        // target: both views come from the same entries
        let store = three_member_store();
        let a = MemberId::new("A");
        let b = MemberId::new("B");
        let g = ContextId::global();
        let pop_view = store.received_by(&a, &g).unwrap().get(&b).copied().unwrap();
        let eng_view = store.initiated_by(&b, &g).unwrap().get(&a).copied().unwrap();
        assert_eq!(pop_view, eng_view);
    }

    #[test]
    fn social_capital_counts() {
        let store = three_member_store();
        let cap = store.social_capital();
        assert_eq!(cap, SocialCapital { total: 3, unique: 2 });

        let empty = InteractionStore::builder().build();
        assert_eq!(empty.social_capital(), SocialCapital { total: 0, unique: 0 });
    }

    #[test]
    fn negative_events_do_not_add_capital() {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("C", "A").negative()).unwrap();
        let store = b.build();
        assert_eq!(store.social_capital(), SocialCapital { total: 1, unique: 1 });
    }

    #[test]
    fn removal_drops_incident_events_but_keeps_members() {
        let store = three_member_store();
        let removed: BTreeSet<MemberId> = [MemberId::new("A")].into();
        let after = store.without_members(&removed).unwrap();
        assert_eq!(after.member_count(), 2);
        assert_eq!(after.ledger().len(), 0);
        assert_eq!(after.social_capital(), SocialCapital { total: 0, unique: 0 });
    }

    #[test]
    fn removal_of_nothing_is_identity() {
        let store = three_member_store();
        let after = store.without_members(&BTreeSet::new()).unwrap();
        assert_eq!(store, after);
    }

    #[test]
    fn removal_of_everyone_leaves_empty_store() {
        let store = three_member_store();
        let all: BTreeSet<MemberId> = store.members().clone();
        let after = store.without_members(&all).unwrap();
        assert_eq!(after.member_count(), 0);
        assert_eq!(after.social_capital(), SocialCapital { total: 0, unique: 0 });
    }

    #[test]
    fn json_round_trip_preserves_everything() {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A").at(7).in_context("movies")).unwrap();
        b.add_interaction(
            Interaction::new("C", "A").with_kind(InteractionKind::Passive),
        )
        .unwrap();
        b.add_interaction(Interaction::new("A", "B").negative().with_weight(2)).unwrap();
        let store = b.build();

        let json = store.to_canonical_json();
        let loaded = InteractionStore::from_json(&json).unwrap();
        assert_eq!(store, loaded);
        // canonical form is stable under re-serialization
        assert_eq!(json, loaded.to_canonical_json());
    }

    #[test]
    fn passive_events_default_context_present() {
        let store = InteractionStore::builder().build();
        assert!(store.contexts().contains(&ContextId::global()));
        let multi = {
            let mut b = StoreBuilder::new();
            b.add_interaction(Interaction::new("B", "A").in_context("movies")).unwrap();
            b.build()
        };
        assert!(multi.contexts().contains(&ContextId::global()));
        assert!(multi.contexts().contains(&ContextId::new("movies")));
    }
}
