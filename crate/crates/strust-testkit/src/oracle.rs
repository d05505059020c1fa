//! Brute-force evaluation of the trust formulas, straight off the ledger.

use strust::{Alpha, ContextId, InteractionStore, MemberId, Polarity};

/// Positive/negative activity totals for initiator -> receiver in one
/// context, recounted by scanning every ledger entry.
pub fn recount(
    store: &InteractionStore,
    initiator: &MemberId,
    receiver: &MemberId,
    context: &ContextId,
) -> (u64, u64) {
    let mut pos = 0;
    let mut neg = 0;
    for event in store.ledger() {
        if &event.source == initiator && &event.target == receiver && &event.context == context {
            match event.polarity {
                Polarity::Positive => pos += event.weight,
                Polarity::Negative => neg += event.weight,
            }
        }
    }
    (pos, neg)
}

fn beta(pos: u64, neg: u64) -> f64 {
    (pos as f64 + 1.0) / ((pos + neg) as f64 + 2.0)
}

/// Sum of beta means over all other members, divided by |M| - 1.
fn member_context_trust<F>(store: &InteractionStore, member: &MemberId, counts: F) -> f64
where
    F: Fn(&MemberId) -> (u64, u64),
{
    let m = store.member_count();
    if m <= 1 {
        return 0.5;
    }
    let mut sum = 0.0;
    for other in store.members() {
        if other == member {
            continue;
        }
        let (pos, neg) = counts(other);
        sum += beta(pos, neg);
    }
    sum / (m - 1) as f64
}

pub fn pop_trust_context(store: &InteractionStore, member: &MemberId, context: &ContextId) -> f64 {
    member_context_trust(store, member, |other| recount(store, other, member, context))
}

pub fn eng_trust_context(store: &InteractionStore, member: &MemberId, context: &ContextId) -> f64 {
    member_context_trust(store, member, |other| recount(store, member, other, context))
}

fn over_contexts<F>(store: &InteractionStore, per_context: F) -> f64
where
    F: Fn(&ContextId) -> f64,
{
    let contexts = store.contexts();
    let sum: f64 = contexts.iter().map(per_context).sum();
    sum / contexts.len() as f64
}

pub fn pop_trust(store: &InteractionStore, member: &MemberId) -> f64 {
    over_contexts(store, |ctx| pop_trust_context(store, member, ctx))
}

pub fn eng_trust(store: &InteractionStore, member: &MemberId) -> f64 {
    over_contexts(store, |ctx| eng_trust_context(store, member, ctx))
}

/// (popularity, engagement, social) for one member.
pub fn strust_member(store: &InteractionStore, member: &MemberId, alpha: Alpha) -> (f64, f64, f64) {
    let pop = pop_trust(store, member);
    let eng = eng_trust(store, member);
    let a = alpha.value();
    (pop, eng, a * pop + (1.0 - a) * eng)
}

pub fn strust_community(store: &InteractionStore, alpha: Alpha) -> f64 {
    let m = store.member_count();
    if m == 0 {
        return 0.5;
    }
    let sum: f64 = store
        .members()
        .iter()
        .map(|member| strust_member(store, member, alpha).2)
        .sum();
    sum / m as f64
}

/// (popularity_pair, engagement_pair, social_pair) for a member pair in one
/// context.
pub fn pair_trust(
    store: &InteractionStore,
    a: &MemberId,
    b: &MemberId,
    context: &ContextId,
    alpha: Alpha,
) -> (f64, f64, f64) {
    let (b2a_pos, b2a_neg) = recount(store, b, a, context);
    let (a2b_pos, a2b_neg) = recount(store, a, b, context);
    let pop_pair = beta(b2a_pos, b2a_neg) + beta(a2b_pos, a2b_neg);
    let eng_pair = beta(a2b_pos, a2b_neg) + beta(b2a_pos, b2a_neg);
    let w = alpha.value();
    (pop_pair, eng_pair, w * pop_pair + (1.0 - w) * eng_pair)
}

/// (total positive interactions, distinct positive ordered pairs).
pub fn social_capital(store: &InteractionStore) -> (u64, u64) {
    let mut total = 0;
    let mut pairs = std::collections::BTreeSet::new();
    for event in store.ledger() {
        if event.polarity == Polarity::Positive {
            total += event.weight;
            pairs.insert((event.source.clone(), event.target.clone()));
        }
    }
    (total, pairs.len() as u64)
}
