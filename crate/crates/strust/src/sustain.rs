//! Member-removal sustainability experiments.
//!
//! Each experiment ranks the community under one trust kind, removes the top
//! p% of members together with every interaction touching them, and measures
//! what the loss does to community trust and social capital. Every percent
//! is measured independently against the original store; because the ranking
//! is fixed, the removal sets are nested prefixes of it.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::recommend::{percent_to_count, rank, RankKind};
use crate::store::{InteractionStore, SocialCapital};
use crate::trust::{TrustEngine, BOOTSTRAP_TRUST};
use crate::types::{Alpha, MemberId, Polarity};

pub const DEFAULT_PERCENTS: [f64; 3] = [5.0, 10.0, 15.0];

/// Which ranking drives the removals and at which percents.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalSpec {
    kind: RankKind,
    percents: Vec<f64>,
}

impl RemovalSpec {
    /// Percents must be strictly increasing and each strictly inside
    /// (0, 100); per-store bounds are checked when the experiment runs.
    pub fn new(kind: RankKind, percents: Vec<f64>) -> Result<Self> {
        if percents.is_empty() {
            return Err(Error::InvalidSpec("no percents given".to_string()));
        }
        for p in &percents {
            if !(p.is_finite() && *p > 0.0 && *p < 100.0) {
                return Err(Error::InvalidPercent(*p));
            }
        }
        if percents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(
                "percents must be strictly increasing".to_string(),
            ));
        }
        Ok(RemovalSpec { kind, percents })
    }

    pub fn kind(&self) -> RankKind {
        self.kind
    }

    pub fn percents(&self) -> &[f64] {
        &self.percents
    }
}

/// Before/after community metrics for one removal experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovalReport {
    pub percent: f64,
    pub removed: BTreeSet<MemberId>,
    pub trust_before: f64,
    pub trust_after: f64,
    /// Bootstrap-adjusted drop: 100 * (before - after) / (before - 0.5).
    /// None when trust_before does not clear the bootstrap.
    pub trust_drop_pct: Option<f64>,
    pub capital_before: SocialCapital,
    pub capital_after: SocialCapital,
    /// Drop in total positive interactions (the social-capital measure).
    pub capital_drop_pct: f64,
    /// Drop in unique interacting pairs, reported separately and never
    /// conflated with the total-based capital drop.
    pub unique_drop_pct: f64,
    /// Total-vs-unique difference inside the post-removal store:
    /// 100 * (total - unique) / total.
    pub gap_pct: f64,
    /// Same quantity as capital_drop_pct, kept under the name the
    /// interaction-reduction curve uses.
    pub interactions_reduced_pct: f64,
    /// How much faster total interactions fall than unique ones:
    /// capital_drop_pct - unique_drop_pct.
    pub drop_difference_pct: f64,
}

fn pct_drop(before: u64, after: u64) -> f64 {
    if before == 0 {
        0.0
    } else {
        100.0 * (before - after) as f64 / before as f64
    }
}

/// Removes the members and every interaction incident to any of them.
pub fn remove_members(
    store: &InteractionStore,
    members: &BTreeSet<MemberId>,
) -> Result<InteractionStore> {
    store.without_members(members)
}

/// Runs one removal experiment per percent, each independently from the
/// original store, and returns the reports ordered by percent.
pub fn run_removal(
    store: &InteractionStore,
    spec: &RemovalSpec,
    alpha: Alpha,
) -> Result<Vec<RemovalReport>> {
    let m = store.member_count();
    let ranking = rank(store, spec.kind);
    let trust_before = TrustEngine::new(store).strust_community(alpha).value;
    let capital_before = store.social_capital();

    let mut reports = Vec::with_capacity(spec.percents.len());
    for &percent in &spec.percents {
        let n = percent_to_count(percent, m);
        if n == 0 || n >= m {
            return Err(Error::KOutOfRange {
                k: n,
                max: m.saturating_sub(1),
            });
        }
        let removed = ranking.top_set(n);
        let after = store.without_members(&removed)?;
        let trust_after = TrustEngine::new(&after).strust_community(alpha).value;
        let capital_after = after.social_capital();

        let trust_drop_pct = if trust_before > BOOTSTRAP_TRUST {
            Some(100.0 * (trust_before - trust_after) / (trust_before - BOOTSTRAP_TRUST))
        } else {
            None
        };
        let capital_drop_pct = pct_drop(capital_before.total, capital_after.total);
        let unique_drop_pct = pct_drop(capital_before.unique, capital_after.unique);
        let gap_pct = if capital_after.total == 0 {
            0.0
        } else {
            100.0 * (capital_after.total - capital_after.unique) as f64
                / capital_after.total as f64
        };

        reports.push(RemovalReport {
            percent,
            removed,
            trust_before,
            trust_after,
            trust_drop_pct,
            capital_before,
            capital_after,
            capital_drop_pct,
            unique_drop_pct,
            gap_pct,
            interactions_reduced_pct: capital_drop_pct,
            drop_difference_pct: capital_drop_pct - unique_drop_pct,
        });
    }
    Ok(reports)
}

/// Projects the post-removal total-vs-unique gap per percent.
pub fn gap_curve(reports: &[RemovalReport]) -> Vec<(f64, f64)> {
    reports.iter().map(|r| (r.percent, r.gap_pct)).collect()
}

/// True when the report's capital drop exceeds the threshold.
pub fn capital_drop_check(report: &RemovalReport, threshold_pct: f64) -> bool {
    report.capital_drop_pct > threshold_pct
}

/// Positive interactions incident to any member of `removed`, counted
/// directly off the ledger. Used to cross-check capital conservation.
pub fn incident_positive_interactions(store: &InteractionStore, removed: &BTreeSet<MemberId>) -> u64 {
    store
        .ledger()
        .iter()
        .filter(|e| {
            e.polarity == Polarity::Positive
                && (removed.contains(&e.source) || removed.contains(&e.target))
        })
        .map(|e| e.weight)
        .sum()
}
