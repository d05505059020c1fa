//! Seeded random store generation for oracle and property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strust::{Interaction, InteractionKind, InteractionStore, StoreBuilder};

/// Bounds for generated stores.
#[derive(Debug, Clone, Copy)]
pub struct StoreParams {
    pub max_members: usize,
    pub max_contexts: usize,
    /// Cap on activities per ordered pair per context (weights count).
    pub max_events_per_pair: u64,
    pub allow_negative: bool,
    pub allow_passive: bool,
    /// Chance that a member stays isolated even when events are possible.
    pub isolation_bias: f64,
}

impl Default for StoreParams {
    fn default() -> Self {
        StoreParams {
            max_members: 5,
            max_contexts: 2,
            max_events_per_pair: 3,
            allow_negative: true,
            allow_passive: true,
            isolation_bias: 0.2,
        }
    }
}

const CONTEXT_NAMES: [&str; 3] = ["global", "movies", "music"];

/// Deterministically generates one store for the given seed.
pub fn random_store(seed: u64, params: &StoreParams) -> InteractionStore {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let member_count = rng.random_range(1..=params.max_members.max(1));
    let context_count = rng.random_range(1..=params.max_contexts.max(1).min(CONTEXT_NAMES.len()));

    let members: Vec<String> = (1..=member_count).map(|i| i.to_string()).collect();
    let mut builder = StoreBuilder::new();
    for m in &members {
        builder.add_member(m.as_str());
    }

    let isolated: Vec<bool> = members
        .iter()
        .map(|_| rng.random_bool(params.isolation_bias))
        .collect();

    for (si, source) in members.iter().enumerate() {
        for (ti, target) in members.iter().enumerate() {
            if si == ti {
                continue;
            }
            for ctx in CONTEXT_NAMES.iter().take(context_count) {
                if isolated[si] || isolated[ti] {
                    continue;
                }
                let events = rng.random_range(0..=params.max_events_per_pair);
                for _ in 0..events {
                    let negative = params.allow_negative && rng.random_bool(0.3);
                    let passive = params.allow_passive && !negative && rng.random_bool(0.2);
                    let mut event = Interaction::new(source.as_str(), target.as_str())
                        .in_context(*ctx);
                    if negative {
                        event = event.negative();
                    }
                    if passive {
                        event = event.with_kind(InteractionKind::Passive);
                    }
                    if rng.random_bool(0.5) {
                        event = event.at(rng.random_range(0..1_000_000));
                    }
                    builder
                        .add_interaction(event)
                        .expect("generated events satisfy the invariants");
                }
            }
        }
    }
    builder.build()
}

/// All-positive variant, for floor and monotonicity properties.
pub fn random_positive_store(seed: u64, params: &StoreParams) -> InteractionStore {
    let params = StoreParams {
        allow_negative: false,
        ..*params
    };
    random_store(seed, &params)
}
