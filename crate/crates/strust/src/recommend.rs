//! Rankings, role recommendation, and top-K comparison machinery.
//!
//! Leaders are the members the community trusts most (popularity ranking,
//! alpha = 1); mentors are the members who invest most in the community
//! (engagement ranking, alpha = 0). `rank` with `RankKind::Social` covers
//! any other blend.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::store::InteractionStore;
use crate::trust::TrustEngine;
use crate::types::{Alpha, MemberId};

/// Which trust value a ranking is ordered by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankKind {
    Popularity,
    Engagement,
    Social(Alpha),
}

impl fmt::Display for RankKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankKind::Popularity => f.write_str("popularity"),
            RankKind::Engagement => f.write_str("engagement"),
            RankKind::Social(alpha) => write!(f, "social@{alpha}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub member: MemberId,
    pub score: f64,
}

/// Every member exactly once, sorted by score descending with ties broken by
/// ascending member id.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub kind: RankKind,
    pub entries: Vec<RankEntry>,
}

impl Ranking {
    pub fn top(&self, k: usize) -> impl Iterator<Item = &RankEntry> {
        self.entries.iter().take(k)
    }

    pub fn top_set(&self, k: usize) -> BTreeSet<MemberId> {
        self.top(k).map(|e| e.member.clone()).collect()
    }

    /// 1-based position of a member, if present.
    pub fn position(&self, member: &MemberId) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| &e.member == member)
            .map(|i| i + 1)
    }
}

/// Orders scored members by score descending, member id ascending. Exposed
/// separately so order-invariance properties can be checked on raw score
/// lists.
pub fn order_entries(mut entries: Vec<RankEntry>) -> Vec<RankEntry> {
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.member.cmp(&b.member))
    });
    entries
}

/// Ranks every member of the store under the given trust kind.
pub fn rank(store: &InteractionStore, kind: RankKind) -> Ranking {
    let alpha = match kind {
        RankKind::Popularity => Alpha::POPULARITY_ONLY,
        RankKind::Engagement => Alpha::ENGAGEMENT_ONLY,
        RankKind::Social(a) => a,
    };
    let engine = TrustEngine::new(store);
    let entries = engine
        .trust_table(alpha)
        .into_iter()
        .map(|score| RankEntry {
            member: score.member,
            score: match kind {
                RankKind::Popularity => score.popularity,
                RankKind::Engagement => score.engagement,
                RankKind::Social(_) => score.social,
            },
        })
        .collect();
    Ranking {
        kind,
        entries: order_entries(entries),
    }
}

fn check_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        Err(Error::KOutOfRange { k, max })
    } else {
        Ok(())
    }
}

/// Top-k of the popularity ranking.
pub fn recommend_leaders(store: &InteractionStore, k: usize) -> Result<Vec<MemberId>> {
    check_k(k, store.member_count())?;
    Ok(rank(store, RankKind::Popularity)
        .top(k)
        .map(|e| e.member.clone())
        .collect())
}

/// Top-k of the engagement ranking.
pub fn recommend_mentors(store: &InteractionStore, k: usize) -> Result<Vec<MemberId>> {
    check_k(k, store.member_count())?;
    Ok(rank(store, RankKind::Engagement)
        .top(k)
        .map(|e| e.member.clone())
        .collect())
}

/// Overlap between the top-k leader and mentor selections for one k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapPoint {
    pub k: usize,
    pub overlap: usize,
    pub leaders: BTreeSet<MemberId>,
    pub mentors: BTreeSet<MemberId>,
}

/// Overlap curve for k = 1..=k_max.
pub fn topk_overlap(store: &InteractionStore, k_max: usize) -> Result<Vec<OverlapPoint>> {
    check_k(k_max, store.member_count())?;
    let leaders = rank(store, RankKind::Popularity);
    let mentors = rank(store, RankKind::Engagement);
    let mut points = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let leader_set = leaders.top_set(k);
        let mentor_set = mentors.top_set(k);
        let overlap = leader_set.intersection(&mentor_set).count();
        points.push(OverlapPoint {
            k,
            overlap,
            leaders: leader_set,
            mentors: mentor_set,
        });
    }
    Ok(points)
}

/// Members eliminated from exactly one of two rankings when the top
/// `percent` of each is removed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniqueEliminations {
    /// Members removed per list (the same n for both).
    pub removed_per_list: usize,
    /// Size of the symmetric difference of the two top-n sets.
    pub unique_count: usize,
    /// Members only the first ranking eliminates.
    pub only_in_a: BTreeSet<MemberId>,
    /// Members only the second ranking eliminates.
    pub only_in_b: BTreeSet<MemberId>,
    pub set_a: BTreeSet<MemberId>,
    pub set_b: BTreeSet<MemberId>,
}

impl UniqueEliminations {
    /// Unique members counted per list rather than over the union. With
    /// equal-sized lists |A \ B| = |B \ A|, so this is unique_count / 2.
    pub fn per_list_count(&self) -> usize {
        self.only_in_a.len()
    }
}

/// Count of members removed for a given percentage, rounding half up.
pub fn percent_to_count(percent: f64, member_count: usize) -> usize {
    (percent * member_count as f64 / 100.0 + 0.5).floor() as usize
}

/// Compares the top-percent eliminations under two trust kinds.
pub fn unique_eliminations(
    store: &InteractionStore,
    kind_a: RankKind,
    kind_b: RankKind,
    percent: f64,
) -> Result<UniqueEliminations> {
    if !(percent > 0.0 && percent < 100.0) {
        return Err(Error::InvalidPercent(percent));
    }
    let m = store.member_count();
    let n = percent_to_count(percent, m);
    check_k(n, m)?;
    let set_a = rank(store, kind_a).top_set(n);
    let set_b = rank(store, kind_b).top_set(n);
    let only_in_a: BTreeSet<MemberId> = set_a.difference(&set_b).cloned().collect();
    let only_in_b: BTreeSet<MemberId> = set_b.difference(&set_a).cloned().collect();
    Ok(UniqueEliminations {
        removed_per_list: n,
        unique_count: only_in_a.len() + only_in_b.len(),
        only_in_a,
        only_in_b,
        set_a,
        set_b,
    })
}

/// Which side of a member's ledger an ego network shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgoMode {
    /// The member plus everyone it initiated events toward, arrows outward.
    Engagement,
    /// The member plus everyone who sent it events, arrows inward.
    Popularity,
}

impl fmt::Display for EgoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EgoMode::Engagement => f.write_str("engagement"),
            EgoMode::Popularity => f.write_str("popularity"),
        }
    }
}

fn dot_quote(id: &MemberId) -> String {
    format!("\"{}\"", id.as_str().replace('\\', "\\\\").replace('"', "\\\""))
}

/// Extracts a member's ego network as DOT text. Edge weights carry the
/// number of activities (weights expanded) between the pair; no layout hints
/// are emitted.
pub fn ego_network(store: &InteractionStore, member: &MemberId, mode: EgoMode) -> Result<String> {
    if !store.contains_member(member) {
        return Err(Error::UnknownMember(member.clone()));
    }

    // counterpart -> total activities, summed across contexts
    let mut counterparts: std::collections::BTreeMap<MemberId, u64> = Default::default();
    for ctx in store.contexts() {
        let counts = match mode {
            EgoMode::Engagement => store.initiated_by(member, ctx),
            EgoMode::Popularity => store.received_by(member, ctx),
        };
        if let Some(counts) = counts {
            for (other, c) in counts {
                *counterparts.entry(other.clone()).or_default() += c.total();
            }
        }
    }

    let mut nodes: BTreeSet<&MemberId> = counterparts.keys().collect();
    nodes.insert(member);
    let mut dot = String::from("digraph ego {\n");
    for node in &nodes {
        let _ = writeln!(dot, "  {};", dot_quote(node));
    }
    for (other, weight) in &counterparts {
        let (from, to) = match mode {
            EgoMode::Engagement => (member, other),
            EgoMode::Popularity => (other, member),
        };
        let _ = writeln!(
            dot,
            "  {} -> {} [weight={}];",
            dot_quote(from),
            dot_quote(to),
            weight
        );
    }
    dot.push_str("}\n");
    Ok(dot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::StoreBuilder;
    use crate::types::Interaction;

    const EPS: f64 = 1e-12;

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
    fn engagement_ranking_order_and_scores() {
        let store = three_member_store();
        let ranking = rank(&store, RankKind::Engagement);
        let order: Vec<&str> = ranking.entries.iter().map(|e| e.member.as_str()).collect();
        assert_eq!(order, ["B", "C", "A"]);
        assert!((ranking.entries[0].score - 0.625).abs() < EPS);
        assert!((ranking.entries[1].score - 7.0 / 12.0).abs() < EPS);
        assert!((ranking.entries[2].score - 0.5).abs() < EPS);
    }

    #[test]
    fn popularity_ranking_breaks_tie_by_id() {
        let store = three_member_store();
        let ranking = rank(&store, RankKind::Popularity);
        let order: Vec<&str> = ranking.entries.iter().map(|e| e.member.as_str()).collect();
        // B and C tie at the bootstrap; B sorts first
        assert_eq!(order, ["A", "B", "C"]);
        assert!((ranking.entries[0].score - 17.0 / 24.0).abs() < EPS);
    }

    #[test]
    fn isolated_members_rank_by_id() {
        let store = InteractionStore::with_members(["3", "1", "2"]);
        let ranking = rank(&store, RankKind::Social(Alpha::default()));
        let order: Vec<&str> = ranking.entries.iter().map(|e| e.member.as_str()).collect();
        assert_eq!(order, ["1", "2", "3"]);
        assert!(ranking.entries.iter().all(|e| e.score == 0.5));
    }

    #[test]
    fn ranking_is_stable_across_recomputation() {
        let store = three_member_store();
        assert_eq!(rank(&store, RankKind::Popularity), rank(&store, RankKind::Popularity));
    }

    #[test]
    fn leaders_and_mentors_on_three_member_example() {
        let store = three_member_store();
        assert_eq!(recommend_leaders(&store, 1).unwrap(), vec![id("A")]);
        assert_eq!(recommend_mentors(&store, 1).unwrap(), vec![id("B")]);
        // k = |M| returns everyone
        assert_eq!(recommend_leaders(&store, 3).unwrap().len(), 3);
        assert!(matches!(
            recommend_leaders(&store, 4),
            Err(Error::KOutOfRange { k: 4, max: 3 })
        ));
        assert!(matches!(
            recommend_leaders(&store, 0),
            Err(Error::KOutOfRange { k: 0, max: 3 })
        ));
    }

    #[test]
    fn overlap_curve_on_three_member_example() {
        let store = three_member_store();
        let points = topk_overlap(&store, 3).unwrap();
        assert_eq!(points[0].overlap, 0); // leader A vs mentor B
        assert_eq!(points[2].overlap, 3); // k = |M| covers everyone
        for p in &points {
            assert!(p.overlap <= p.k);
            assert_eq!(p.overlap, p.leaders.intersection(&p.mentors).count());
        }
    }

    #[test]
    fn unique_eliminations_identical_kinds_vanish() {
        let store = three_member_store();
        let res =
            unique_eliminations(&store, RankKind::Popularity, RankKind::Popularity, 50.0).unwrap();
        assert_eq!(res.unique_count, 0);
        assert_eq!(res.per_list_count(), 0);
    }

    #[test]
    fn unique_eliminations_disjoint_tops_hit_upper_bound() {
        let store = three_member_store();
        // top-1 popularity = A, top-1 engagement = B: disjoint, so 2n = 2
        let res =
            unique_eliminations(&store, RankKind::Popularity, RankKind::Engagement, 34.0).unwrap();
        assert_eq!(res.removed_per_list, 1);
        assert_eq!(res.unique_count, 2);
        assert_eq!(res.per_list_count(), 1);
    }

    #[test]
    fn unique_eliminations_symmetric_in_count() {
        let store = three_member_store();
        let ab =
            unique_eliminations(&store, RankKind::Popularity, RankKind::Engagement, 34.0).unwrap();
        let ba =
            unique_eliminations(&store, RankKind::Engagement, RankKind::Popularity, 34.0).unwrap();
        assert_eq!(ab.unique_count, ba.unique_count);
    }

    #[test]
    fn unique_eliminations_domain_errors() {
        let store = three_member_store();
        assert!(matches!(
            unique_eliminations(&store, RankKind::Popularity, RankKind::Engagement, 0.0),
            Err(Error::InvalidPercent(_))
        ));
        // 1% of 3 members rounds to zero removals
        assert!(matches!(
            unique_eliminations(&store, RankKind::Popularity, RankKind::Engagement, 1.0),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn percent_rounding_is_half_up() {
        assert_eq!(percent_to_count(5.0, 1899), 95); // 94.95
        assert_eq!(percent_to_count(10.0, 1899), 190); // 189.9
        assert_eq!(percent_to_count(15.0, 1899), 285); // 284.85
        assert_eq!(percent_to_count(50.0, 3), 2); // 1.5 rounds up
        assert_eq!(percent_to_count(25.0, 2), 1); // 0.5 rounds up
    }

    #[test]
    fn ego_popularity_of_a_shows_inward_edges() {
        let store = three_member_store();
        let dot = ego_network(&store, &id("A"), EgoMode::Popularity).unwrap();
        let expected = "digraph ego {\n  \"A\";\n  \"B\";\n  \"C\";\n  \"B\" -> \"A\" [weight=2];\n  \"C\" -> \"A\" [weight=1];\n}\n";
        assert_eq!(dot, expected);
    }

    #[test]
    fn ego_engagement_of_a_is_single_node() {
        let store = three_member_store();
        let dot = ego_network(&store, &id("A"), EgoMode::Engagement).unwrap();
        assert_eq!(dot, "digraph ego {\n  \"A\";\n}\n");
    }

    #[test]
    fn ego_unknown_member_errors() {
        let store = three_member_store();
        assert!(matches!(
            ego_network(&store, &id("Z"), EgoMode::Popularity),
            Err(Error::UnknownMember(_))
        ));
    }
}
