//! Beta-mean trust over the interaction ledger.
//!
//! Every trust quantity reduces to the same kernel: given `p` positive and
//! `n` negative activities, the expected trust is `(p + 1) / (p + n + 2)`,
//! the mean of a Beta(p+1, n+1) distribution. With no evidence the kernel
//! bootstraps at 0.5.
//!
//! Popularity trust aggregates the kernel over events a member received,
//! engagement trust over events it initiated; both average over all `|M|-1`
//! potential counterparts (absent counterparts contribute the 0.5
//! bootstrap) and then over the context set. Social trust is the convex
//! combination `alpha * popularity + (1 - alpha) * engagement`.
//!
//! All operations are pure reads of an immutable store; per-member sums run
//! in canonical member order so results are reproducible bit for bit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::store::{InteractionStore, PairCounts};
use crate::types::{Alpha, ContextId, MemberId};

/// Expected value of the beta-distributed trust for the given evidence.
pub fn beta_mean(pos: u64, neg: u64) -> f64 {
    (pos as f64 + 1.0) / ((pos + neg) as f64 + 2.0)
}

/// The bootstrap trust value: beta mean with no evidence.
pub const BOOTSTRAP_TRUST: f64 = 0.5;

/// How the per-context trust values are folded into a member-level value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContextAggregation {
    /// Mean over the store's full context set; contexts where the member has
    /// no events contribute their bootstrap-laden value.
    #[default]
    FullContextSet,
    /// Sensitivity mode: mean over only the contexts where the member has at
    /// least one event on the relevant side; bootstrap if there are none.
    ActiveContextsOnly,
}

/// Popularity, engagement, and social trust of one member for a given alpha.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrustScore {
    pub member: MemberId,
    pub popularity: f64,
    pub engagement: f64,
    pub social: f64,
    pub alpha: f64,
}

/// Community-level social trust.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommunityTrust {
    pub value: f64,
    pub alpha: f64,
    /// True when the community clears the 0.5 bootstrap bar.
    pub is_trust_community: bool,
    /// Set when the community has at most one member, where the trust
    /// formulas have no counterparts to average over and every value falls
    /// back to the bootstrap.
    pub degenerate: bool,
}

/// Mutual trust of a member pair in one context. Each field is the sum of
/// the two directed beta means, so values live in (0, 2); no normalization
/// is applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairTrust {
    pub a: MemberId,
    pub b: MemberId,
    pub context: ContextId,
    pub popularity_pair: f64,
    pub engagement_pair: f64,
    pub social_pair: f64,
    pub alpha: f64,
}

#[derive(Clone, Copy)]
enum Side {
    Received,
    Initiated,
}

/// Evaluator of the trust equations over one store.
#[derive(Clone, Copy)]
pub struct TrustEngine<'a> {
    store: &'a InteractionStore,
    aggregation: ContextAggregation,
}

impl<'a> TrustEngine<'a> {
    pub fn new(store: &'a InteractionStore) -> Self {
        TrustEngine {
            store,
            aggregation: ContextAggregation::FullContextSet,
        }
    }

    pub fn with_aggregation(store: &'a InteractionStore, aggregation: ContextAggregation) -> Self {
        TrustEngine { store, aggregation }
    }

    pub fn store(&self) -> &'a InteractionStore {
        self.store
    }

    /// Popularity trust of `member` for one context: beta means of what it
    /// received from each other member, averaged over `|M| - 1`.
    pub fn pop_trust_context(&self, member: &MemberId, context: &ContextId) -> Result<f64> {
        self.check(member, Some(context))?;
        Ok(self.context_trust(member, context, Side::Received))
    }

    /// Engagement trust of `member` for one context: beta means of what it
    /// initiated toward each other member, averaged over `|M| - 1`.
    pub fn eng_trust_context(&self, member: &MemberId, context: &ContextId) -> Result<f64> {
        self.check(member, Some(context))?;
        Ok(self.context_trust(member, context, Side::Initiated))
    }

    /// Popularity trust aggregated over the context set.
    pub fn pop_trust(&self, member: &MemberId) -> Result<f64> {
        self.check(member, None)?;
        Ok(self.aggregate_trust(member, Side::Received))
    }

    /// Engagement trust aggregated over the context set.
    pub fn eng_trust(&self, member: &MemberId) -> Result<f64> {
        self.check(member, None)?;
        Ok(self.aggregate_trust(member, Side::Initiated))
    }

    /// Social trust of one member: the exact convex combination of its
    /// popularity and engagement trust.
    pub fn strust_member(&self, member: &MemberId, alpha: Alpha) -> Result<TrustScore> {
        self.check(member, None)?;
        Ok(self.score_unchecked(member, alpha))
    }

    fn score_unchecked(&self, member: &MemberId, alpha: Alpha) -> TrustScore {
        let popularity = self.aggregate_trust(member, Side::Received);
        let engagement = self.aggregate_trust(member, Side::Initiated);
        let a = alpha.value();
        TrustScore {
            member: member.clone(),
            popularity,
            engagement,
            social: a * popularity + (1.0 - a) * engagement,
            alpha: a,
        }
    }

    /// Scores for every member, in canonical member order.
    pub fn trust_table(&self, alpha: Alpha) -> Vec<TrustScore> {
        self.store
            .members()
            .iter()
            .map(|m| self.score_unchecked(m, alpha))
            .collect()
    }

    /// Mean social trust over all members, with the trust-community flag.
    pub fn strust_community(&self, alpha: Alpha) -> CommunityTrust {
        let m = self.store.member_count();
        if m == 0 {
            return CommunityTrust {
                value: BOOTSTRAP_TRUST,
                alpha: alpha.value(),
                is_trust_community: false,
                degenerate: true,
            };
        }
        let sum: f64 = self
            .trust_table(alpha)
            .iter()
            .map(|score| score.social)
            .sum();
        let value = sum / m as f64;
        CommunityTrust {
            value,
            alpha: alpha.value(),
            is_trust_community: value > BOOTSTRAP_TRUST,
            degenerate: m == 1,
        }
    }

    /// Mutual trust between two distinct members in one context: the sum of
    /// the two directed beta means on each side of the ledger.
    pub fn pair_trust(
        &self,
        a: &MemberId,
        b: &MemberId,
        context: &ContextId,
        alpha: Alpha,
    ) -> Result<PairTrust> {
        if a == b {
            return Err(Error::SamePair(a.clone()));
        }
        self.check(a, Some(context))?;
        self.check(b, None)?;

        // counts of events b -> a and a -> b
        let b_to_a = self.store.counts_unchecked(a, b, context);
        let a_to_b = self.store.counts_unchecked(b, a, context);
        let popularity_pair = pair_kernel(b_to_a, a_to_b);
        // the same entries viewed from the engagement side
        let engagement_pair = pair_kernel(a_to_b, b_to_a);
        let w = alpha.value();
        Ok(PairTrust {
            a: a.clone(),
            b: b.clone(),
            context: context.clone(),
            popularity_pair,
            engagement_pair,
            social_pair: w * popularity_pair + (1.0 - w) * engagement_pair,
            alpha: w,
        })
    }

    fn check(&self, member: &MemberId, context: Option<&ContextId>) -> Result<()> {
        if !self.store.contains_member(member) {
            return Err(Error::UnknownMember(member.clone()));
        }
        if let Some(ctx) = context {
            if !self.store.contexts().contains(ctx) && !ctx.is_global() {
                return Err(Error::UnknownContext(ctx.clone()));
            }
        }
        Ok(())
    }

    fn side_counts(
        &self,
        member: &MemberId,
        context: &ContextId,
        side: Side,
    ) -> Option<&std::collections::BTreeMap<MemberId, PairCounts>> {
        match side {
            Side::Received => self.store.received_by(member, context),
            Side::Initiated => self.store.initiated_by(member, context),
        }
    }

    fn context_trust(&self, member: &MemberId, context: &ContextId, side: Side) -> f64 {
        let m = self.store.member_count();
        if m <= 1 {
            // degenerate community: no counterparts to average over
            return BOOTSTRAP_TRUST;
        }
        let mut sum = 0.0;
        let mut counterparts = 0usize;
        if let Some(counts) = self.side_counts(member, context, side) {
            for (other, c) in counts {
                debug_assert!(other != member, "ledger must not hold self-interactions");
                sum += beta_mean(c.positive, c.negative);
                counterparts += 1;
            }
        }
        let silent = (m - 1 - counterparts) as f64;
        (sum + BOOTSTRAP_TRUST * silent) / (m - 1) as f64
    }

    fn aggregate_trust(&self, member: &MemberId, side: Side) -> f64 {
        let contexts = self.store.contexts();
        match self.aggregation {
            ContextAggregation::FullContextSet => {
                let sum: f64 = contexts
                    .iter()
                    .map(|ctx| self.context_trust(member, ctx, side))
                    .sum();
                sum / contexts.len() as f64
            }
            ContextAggregation::ActiveContextsOnly => {
                let active: Vec<&ContextId> = contexts
                    .iter()
                    .filter(|ctx| {
                        self.side_counts(member, ctx, side)
                            .is_some_and(|c| !c.is_empty())
                    })
                    .collect();
                if active.is_empty() {
                    return BOOTSTRAP_TRUST;
                }
                let sum: f64 = active
                    .iter()
                    .map(|ctx| self.context_trust(member, ctx, side))
                    .sum();
                sum / active.len() as f64
            }
        }
    }
}

fn pair_kernel(first: PairCounts, second: PairCounts) -> f64 {
    beta_mean(first.positive, first.negative) + beta_mean(second.positive, second.negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::StoreBuilder;
    use crate::types::Interaction;

    const EPS: f64 = 1e-12;

    /// Members {A,B,C} with B->A twice and C->A once, all positive.
    fn three_member_store() -> InteractionStore {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("C", "A")).unwrap();
        b.build()
    }

    fn id(s: &str) -> MemberId {
        MemberId::new(s)
    }

    #[test]
    fn beta_mean_kernel() {
        assert_eq!(beta_mean(0, 0), 0.5);
        assert!((beta_mean(1, 0) - 2.0 / 3.0).abs() < EPS);
        assert!((beta_mean(0, 4) - 1.0 / 6.0).abs() < EPS);
    }

    #[test]
    fn popularity_on_three_member_example() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let g = ContextId::global();
        // (3/4 + 2/3) / 2 = 17/24
        let pop_a = engine.pop_trust_context(&id("A"), &g).unwrap();
        assert!((pop_a - 17.0 / 24.0).abs() < EPS);
        // no incoming events: bootstrap everywhere
        assert_eq!(engine.pop_trust_context(&id("B"), &g).unwrap(), 0.5);
        assert_eq!(engine.pop_trust_context(&id("C"), &g).unwrap(), 0.5);
    }

    #[test]
    fn engagement_on_three_member_example() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let g = ContextId::global();
        // (beta(2,0) + beta(0,0)) / 2 = (0.75 + 0.5) / 2
        assert!((engine.eng_trust_context(&id("B"), &g).unwrap() - 0.625).abs() < EPS);
        // A initiated nothing
        assert_eq!(engine.eng_trust_context(&id("A"), &g).unwrap(), 0.5);
        // (2/3 + 1/2) / 2 = 7/12
        assert!((engine.eng_trust_context(&id("C"), &g).unwrap() - 7.0 / 12.0).abs() < EPS);
    }

    #[test]
    fn single_context_aggregate_equals_context_value() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let g = ContextId::global();
        assert_eq!(
            engine.pop_trust(&id("A")).unwrap(),
            engine.pop_trust_context(&id("A"), &g).unwrap()
        );
    }

    #[test]
    fn two_context_aggregate_is_plain_mean() {
        // one positive B->A in each of two contexts; aggregate over X =
        // {global, movies}
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("B", "A").in_context("movies")).unwrap();
        let store = b.build();
        let engine = TrustEngine::new(&store);
        let g = ContextId::global();
        let m = ContextId::new("movies");
        let expected = (engine.pop_trust_context(&id("A"), &g).unwrap()
            + engine.pop_trust_context(&id("A"), &m).unwrap())
            / 2.0;
        assert!((engine.pop_trust(&id("A")).unwrap() - expected).abs() < EPS);
    }

    #[test]
    fn active_contexts_only_mode_skips_silent_contexts() {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A")).unwrap();
        b.add_interaction(Interaction::new("C", "B").in_context("movies")).unwrap();
        let store = b.build();
        let engine = TrustEngine::with_aggregation(&store, ContextAggregation::ActiveContextsOnly);
        let g = ContextId::global();
        // A only receives in the global context, so the movies bootstrap is
        // not averaged in
        assert_eq!(
            engine.pop_trust(&id("A")).unwrap(),
            engine.pop_trust_context(&id("A"), &g).unwrap()
        );
        // A has no engagement anywhere: plain bootstrap
        assert_eq!(engine.eng_trust(&id("A")).unwrap(), 0.5);
    }

    #[test]
    fn social_trust_is_exact_convex_combination() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let score = engine.strust_member(&id("A"), Alpha::new(0.5).unwrap()).unwrap();
        assert!((score.social - (17.0 / 24.0 + 0.5) / 2.0).abs() < EPS);

        let pure_pop = engine.strust_member(&id("A"), Alpha::POPULARITY_ONLY).unwrap();
        assert_eq!(pure_pop.social, pure_pop.popularity);
        let pure_eng = engine.strust_member(&id("A"), Alpha::ENGAGEMENT_ONLY).unwrap();
        assert_eq!(pure_eng.social, pure_eng.engagement);
    }

    #[test]
    fn community_trust_on_three_member_example() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let community = engine.strust_community(Alpha::new(0.5).unwrap());
        // members: A (0.70833 + 0.5)/2, B (0.5 + 0.625)/2, C (0.5 + 7/12)/2
        let expected = ((17.0 / 24.0 + 0.5) / 2.0 + 0.5625 + (0.5 + 7.0 / 12.0) / 2.0) / 3.0;
        assert!((community.value - expected).abs() < EPS);
        assert!(community.is_trust_community);
        assert!(!community.degenerate);
    }

    #[test]
    fn empty_ledger_community_sits_at_bootstrap() {
        let store = InteractionStore::with_members(["a", "b", "c", "d"]);
        let engine = TrustEngine::new(&store);
        let community = engine.strust_community(Alpha::default());
        assert_eq!(community.value, 0.5);
        assert!(!community.is_trust_community);
        assert!(!community.degenerate);
    }

    #[test]
    fn degenerate_single_member_community() {
        let store = InteractionStore::with_members(["only"]);
        let engine = TrustEngine::new(&store);
        assert_eq!(engine.pop_trust(&id("only")).unwrap(), 0.5);
        assert_eq!(engine.eng_trust(&id("only")).unwrap(), 0.5);
        let community = engine.strust_community(Alpha::default());
        assert_eq!(community.value, 0.5);
        assert!(community.degenerate);
    }

    #[test]
    fn empty_store_community_is_degenerate() {
        let store = InteractionStore::builder().build();
        let community = TrustEngine::new(&store).strust_community(Alpha::default());
        assert_eq!(community.value, 0.5);
        assert!(community.degenerate);
    }

    #[test]
    fn negative_interactions_pull_trust_below_bootstrap() {
        let mut b = StoreBuilder::new();
        b.add_interaction(Interaction::new("B", "A").negative().with_weight(4)).unwrap();
        let store = b.build();
        let engine = TrustEngine::new(&store);
        let pop_a = engine.pop_trust(&id("A")).unwrap();
        // (beta(0,4) + 0) ... one counterpart at 1/6, none silent of m-1=1
        assert!((pop_a - 1.0 / 6.0).abs() < EPS);
        assert!(pop_a < 0.5);
    }

    #[test]
    fn pair_trust_on_three_member_example() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let g = ContextId::global();
        let pair = engine
            .pair_trust(&id("A"), &id("B"), &g, Alpha::new(0.3).unwrap())
            .unwrap();
        assert!((pair.popularity_pair - 1.25).abs() < EPS);
        assert!((pair.engagement_pair - 1.25).abs() < EPS);
        assert!((pair.social_pair - 1.25).abs() < EPS);

        // symmetric field-for-field
        let swapped = engine
            .pair_trust(&id("B"), &id("A"), &g, Alpha::new(0.3).unwrap())
            .unwrap();
        assert_eq!(pair.popularity_pair, swapped.popularity_pair);
        assert_eq!(pair.engagement_pair, swapped.engagement_pair);
        assert_eq!(pair.social_pair, swapped.social_pair);
    }

    #[test]
    fn pair_with_no_interactions_is_two_bootstraps() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let pair = engine
            .pair_trust(&id("B"), &id("C"), &ContextId::global(), Alpha::default())
            .unwrap();
        assert_eq!(pair.popularity_pair, 1.0);
        assert_eq!(pair.engagement_pair, 1.0);
        assert_eq!(pair.social_pair, 1.0);
    }

    #[test]
    fn pair_trust_rejects_same_member() {
        let store = three_member_store();
        let engine = TrustEngine::new(&store);
        let err = engine
            .pair_trust(&id("A"), &id("A"), &ContextId::global(), Alpha::default())
            .unwrap_err();
        assert!(matches!(err, Error::SamePair(_)));
    }
}
