//! Cross-checks the trust engine against the brute-force oracle, which
//! recounts the raw ledger and translates every formula literally.

use strust::{Alpha, InteractionStore, StoreBuilder, TrustEngine};
use strust_testkit::{gen, oracle};

const EPS: f64 = 1e-12;

fn three_member_store() -> InteractionStore {
    let mut b = StoreBuilder::new();
    b.add_interaction(strust::Interaction::new("B", "A")).unwrap();
    b.add_interaction(strust::Interaction::new("B", "A")).unwrap();
    b.add_interaction(strust::Interaction::new("C", "A")).unwrap();
    b.build()
}

#[test]
fn oracle_reproduces_hand_computed_values() {
    // the oracle itself must agree with values computed by hand before it
    // can vouch for the engine
    let store = three_member_store();
    let g = strust::ContextId::global();
    let a = strust::MemberId::new("A");
    let b = strust::MemberId::new("B");
    let c = strust::MemberId::new("C");

    assert!((oracle::pop_trust_context(&store, &a, &g) - 17.0 / 24.0).abs() < EPS);
    assert!((oracle::eng_trust_context(&store, &b, &g) - 0.625).abs() < EPS);
    assert!((oracle::eng_trust_context(&store, &c, &g) - 7.0 / 12.0).abs() < EPS);
    assert!((oracle::eng_trust_context(&store, &a, &g) - 0.5).abs() < EPS);

    let half = Alpha::new(0.5).unwrap();
    let (_, _, social_a) = oracle::strust_member(&store, &a, half);
    assert!((social_a - (17.0 / 24.0 + 0.5) / 2.0).abs() < EPS);

    // community mean of (0.604166.., 0.5625, 0.541666..)
    let community = oracle::strust_community(&store, half);
    assert!((community - 0.569_444_444_444_444_4).abs() < 1e-9);

    let (pop_pair, eng_pair, social_pair) =
        oracle::pair_trust(&store, &a, &b, &g, Alpha::new(0.7).unwrap());
    assert!((pop_pair - 1.25).abs() < EPS);
    assert!((eng_pair - 1.25).abs() < EPS);
    assert!((social_pair - 1.25).abs() < EPS);

    assert_eq!(oracle::social_capital(&store), (3, 2));
}

#[test]
fn engine_matches_oracle_on_three_member_example() {
    let store = three_member_store();
    let engine = TrustEngine::new(&store);
    let g = strust::ContextId::global();
    for member in store.members() {
        assert_eq!(
            engine.pop_trust_context(member, &g).unwrap(),
            oracle::pop_trust_context(&store, member, &g)
        );
    }
}

fn assert_store_matches_oracle(store: &InteractionStore, seed: u64) {
    let engine = TrustEngine::new(store);
    let alphas = [
        Alpha::ENGAGEMENT_ONLY,
        Alpha::new(0.5).unwrap(),
        Alpha::POPULARITY_ONLY,
    ];
    for member in store.members() {
        for ctx in store.contexts() {
            let engine_pop = engine.pop_trust_context(member, ctx).unwrap();
            let oracle_pop = oracle::pop_trust_context(store, member, ctx);
            assert!(
                (engine_pop - oracle_pop).abs() < EPS,
                "seed {seed}: pop({member}, {ctx}) engine {engine_pop} oracle {oracle_pop}"
            );
            let engine_eng = engine.eng_trust_context(member, ctx).unwrap();
            let oracle_eng = oracle::eng_trust_context(store, member, ctx);
            assert!(
                (engine_eng - oracle_eng).abs() < EPS,
                "seed {seed}: eng({member}, {ctx}) engine {engine_eng} oracle {oracle_eng}"
            );
        }
        assert!((engine.pop_trust(member).unwrap() - oracle::pop_trust(store, member)).abs() < EPS);
        assert!((engine.eng_trust(member).unwrap() - oracle::eng_trust(store, member)).abs() < EPS);
        for alpha in alphas {
            let score = engine.strust_member(member, alpha).unwrap();
            let (pop, eng, social) = oracle::strust_member(store, member, alpha);
            assert!((score.popularity - pop).abs() < EPS);
            assert!((score.engagement - eng).abs() < EPS);
            assert!(
                (score.social - social).abs() < EPS,
                "seed {seed}: social({member}) engine {} oracle {social}",
                score.social
            );
        }
    }
    for alpha in alphas {
        let engine_c = engine.strust_community(alpha).value;
        let oracle_c = oracle::strust_community(store, alpha);
        assert!(
            (engine_c - oracle_c).abs() < EPS,
            "seed {seed}: community engine {engine_c} oracle {oracle_c}"
        );
    }
    // every unordered pair in every context
    let members: Vec<_> = store.members().iter().cloned().collect();
    for (i, a) in members.iter().enumerate() {
        for b in members.iter().skip(i + 1) {
            for ctx in store.contexts() {
                let pair = engine
                    .pair_trust(a, b, ctx, Alpha::new(0.25).unwrap())
                    .unwrap();
                let (pop, eng, social) =
                    oracle::pair_trust(store, a, b, ctx, Alpha::new(0.25).unwrap());
                assert!((pair.popularity_pair - pop).abs() < EPS);
                assert!((pair.engagement_pair - eng).abs() < EPS);
                assert!((pair.social_pair - social).abs() < EPS);
            }
        }
    }
    let capital = store.social_capital();
    assert_eq!((capital.total, capital.unique), oracle::social_capital(store));
}

#[test]
fn engine_matches_oracle_on_seeded_stores() {
    let params = gen::StoreParams::default();
    for seed in 0..200 {
        let store = gen::random_store(seed, &params);
        assert_store_matches_oracle(&store, seed);
    }
}
