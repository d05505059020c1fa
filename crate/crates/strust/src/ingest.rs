//! Dataset ingestion: directed edge lists and bipartite post logs.
//!
//! Edge-list lines are `source target [weight] [timestamp]` by default;
//! `FormatSpec` can reorder or drop columns, switch the delimiter, skip a
//! header line, and pick the context events land in. Lines starting with `#`
//! are comments. All ingested events are active and positive — the polarity
//! and kind machinery is exercised through the store API and the canonical
//! store JSON, not through raw dataset files.

use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::store::{InteractionStore, StoreBuilder, StoreMetadata};
use crate::types::{ContextId, Interaction, MemberId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Any run of ASCII whitespace.
    #[default]
    Whitespace,
    Comma,
}

impl fmt::Display for Delimiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delimiter::Whitespace => f.write_str("whitespace"),
            Delimiter::Comma => f.write_str("comma"),
        }
    }
}

/// Meaning of one input column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Source,
    Target,
    /// Thread id in a bipartite post log. Declaring this column marks the
    /// input as two-mode; it must be projected, not ingested directly.
    Thread,
    Weight,
    Timestamp,
    Context,
    Ignore,
}

impl Column {
    fn parse(token: &str) -> Result<Column> {
        Ok(match token {
            "source" | "user" => Column::Source,
            "target" => Column::Target,
            "thread" => Column::Thread,
            "weight" => Column::Weight,
            "timestamp" => Column::Timestamp,
            "context" => Column::Context,
            "ignore" | "_" => Column::Ignore,
            other => {
                return Err(Error::InvalidFormat(format!(
                    "unknown column `{other}` (expected source/user, target, thread, weight, timestamp, context, ignore)"
                )))
            }
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Column::Source => "source",
            Column::Target => "target",
            Column::Thread => "thread",
            Column::Weight => "weight",
            Column::Timestamp => "timestamp",
            Column::Context => "context",
            Column::Ignore => "ignore",
        }
    }

    /// Trailing optional columns may be omitted line by line.
    fn optional(&self) -> bool {
        matches!(self, Column::Weight | Column::Timestamp | Column::Ignore)
    }
}

/// Declares how input lines map to interaction fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FormatSpec {
    pub delimiter: Delimiter,
    pub columns: Vec<Column>,
    /// Number of leading lines to skip unconditionally (0 or 1).
    pub header_lines: usize,
    /// Context assigned to events when no context column is declared.
    pub default_context: ContextId,
    /// When true a weight-w line counts as w activities; when false every
    /// line counts once.
    pub expand_weights: bool,
}

impl Default for FormatSpec {
    fn default() -> Self {
        FormatSpec {
            delimiter: Delimiter::Whitespace,
            columns: vec![Column::Source, Column::Target, Column::Weight, Column::Timestamp],
            header_lines: 0,
            default_context: ContextId::global(),
            expand_weights: true,
        }
    }
}

impl FormatSpec {
    /// Parses a comma-separated column list such as
    /// `source,target,weight,timestamp` or `user,thread,timestamp`.
    pub fn with_columns(mut self, spec: &str) -> Result<Self> {
        let mut columns = Vec::new();
        for token in spec.split(',') {
            columns.push(Column::parse(token.trim())?);
        }
        self.columns = columns;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let count = |c: Column| self.columns.iter().filter(|&&x| x == c).count();
        if count(Column::Source) != 1 {
            return Err(Error::InvalidFormat(
                "exactly one source/user column required".to_string(),
            ));
        }
        let targets = count(Column::Target);
        let threads = count(Column::Thread);
        if targets + threads != 1 {
            return Err(Error::InvalidFormat(
                "exactly one target or thread column required".to_string(),
            ));
        }
        for c in [Column::Weight, Column::Timestamp, Column::Context] {
            if count(c) > 1 {
                return Err(Error::InvalidFormat(format!(
                    "duplicate {} column",
                    c.name()
                )));
            }
        }
        if self.header_lines > 1 {
            return Err(Error::InvalidFormat(
                "header_lines must be 0 or 1".to_string(),
            ));
        }
        Ok(())
    }

    /// True when the declared columns describe a two-mode (user, thread) log.
    pub fn is_bipartite(&self) -> bool {
        self.columns.contains(&Column::Thread)
    }

    pub fn has_timestamp(&self) -> bool {
        self.columns.contains(&Column::Timestamp)
    }

    /// One-line echo of the format, embedded in store metadata.
    pub fn describe(&self) -> String {
        let cols: Vec<&str> = self.columns.iter().map(|c| c.name()).collect();
        format!(
            "delimiter={} columns={} header_lines={} context={} expand_weights={}",
            self.delimiter,
            cols.join(","),
            self.header_lines,
            self.default_context,
            self.expand_weights
        )
    }
}

/// What to do with a malformed line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MalformedPolicy {
    /// Fail the whole ingest at the first bad line.
    #[default]
    Fail,
    /// Skip bad lines, reporting each one.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

/// Result of an ingest: the store plus any lines skipped under
/// `MalformedPolicy::Skip`.
#[derive(Debug)]
pub struct Ingested {
    pub store: InteractionStore,
    pub skipped: Vec<SkippedLine>,
}

/// How user->thread posts become user->user interactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionRule {
    /// A post by u in thread t creates one interaction u->v per distinct
    /// poster v that appeared in t before the post. Needs timestamps or
    /// file order.
    PriorPosters,
    /// A post by u in thread t creates one interaction u->v for every other
    /// distinct poster v of t.
    AllCoposters,
}

impl fmt::Display for ProjectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionRule::PriorPosters => f.write_str("prior-posters"),
            ProjectionRule::AllCoposters => f.write_str("all-coposters"),
        }
    }
}

impl ProjectionRule {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "prior-posters" => Ok(ProjectionRule::PriorPosters),
            "all-coposters" => Ok(ProjectionRule::AllCoposters),
            other => Err(Error::InvalidFormat(format!(
                "unknown projection rule `{other}` (expected prior-posters or all-coposters)"
            ))),
        }
    }
}

/// One parsed input line before it turns into interactions.
struct Record {
    source: MemberId,
    counterpart: String,
    context: Option<ContextId>,
    weight: u64,
    timestamp: Option<u64>,
    line: usize,
}

fn split_line<'a>(line: &'a str, delimiter: Delimiter) -> Vec<&'a str> {
    match delimiter {
        Delimiter::Whitespace => line.split_whitespace().collect(),
        Delimiter::Comma => line.split(',').map(str::trim).collect(),
    }
}

fn parse_record(line_no: usize, line: &str, format: &FormatSpec) -> Result<Record> {
    let parse_err = |reason: String| Error::Parse {
        line: line_no,
        reason,
    };
    let tokens = split_line(line, format.delimiter);
    if tokens.len() > format.columns.len() {
        return Err(parse_err(format!(
            "expected at most {} fields, got {}",
            format.columns.len(),
            tokens.len()
        )));
    }

    let mut source: Option<&str> = None;
    let mut counterpart: Option<&str> = None;
    let mut context: Option<ContextId> = None;
    let mut weight: u64 = 1;
    let mut timestamp: Option<u64> = None;

    for (idx, column) in format.columns.iter().enumerate() {
        let token = match tokens.get(idx) {
            Some(t) => *t,
            None => {
                if column.optional() {
                    continue;
                }
                return Err(parse_err(format!(
                    "missing {} field (got {} of {} fields)",
                    column.name(),
                    tokens.len(),
                    format.columns.len()
                )));
            }
        };
        if token.is_empty() {
            return Err(parse_err(format!("empty {} field", column.name())));
        }
        match column {
            Column::Source => source = Some(token),
            Column::Target | Column::Thread => counterpart = Some(token),
            Column::Context => context = Some(ContextId::new(token)),
            Column::Weight => {
                let w: u64 = token
                    .parse()
                    .map_err(|_| parse_err(format!("bad weight `{token}`")))?;
                if w == 0 {
                    return Err(parse_err("weight must be a positive count".to_string()));
                }
                weight = w;
            }
            Column::Timestamp => {
                let t: u64 = token
                    .parse()
                    .map_err(|_| parse_err(format!("bad timestamp `{token}`")))?;
                timestamp = Some(t);
            }
            Column::Ignore => {}
        }
    }

    Ok(Record {
        source: MemberId::new(source.expect("validated format has a source column")),
        counterpart: counterpart
            .expect("validated format has a target or thread column")
            .to_string(),
        context,
        weight,
        timestamp,
        line: line_no,
    })
}

/// Reads non-comment lines and parses them into records, honoring the
/// malformed-line policy.
fn read_records<R: BufRead>(
    reader: R,
    format: &FormatSpec,
    policy: MalformedPolicy,
) -> Result<(Vec<Record>, Vec<SkippedLine>)> {
    format.validate()?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line_no <= format.header_lines {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_record(line_no, trimmed, format) {
            Ok(record) => records.push(record),
            Err(err) => match policy {
                MalformedPolicy::Fail => return Err(err),
                MalformedPolicy::Skip => skipped.push(SkippedLine {
                    line: line_no,
                    reason: err.to_string(),
                }),
            },
        }
    }
    Ok((records, skipped))
}

fn record_weight(record: &Record, format: &FormatSpec) -> u64 {
    if format.expand_weights {
        record.weight
    } else {
        1
    }
}

/// Ingests a directed edge list: one active, positive interaction per line.
pub fn ingest_edge_list<R: BufRead>(
    reader: R,
    format: &FormatSpec,
    policy: MalformedPolicy,
) -> Result<Ingested> {
    if format.is_bipartite() {
        return Err(Error::InvalidFormat(
            "two-mode input (thread column) must be projected, not ingested directly".to_string(),
        ));
    }
    let (records, mut skipped) = read_records(reader, format, policy)?;

    let mut builder = StoreBuilder::new().default_context(format.default_context.clone());
    for record in records {
        let context = record
            .context
            .clone()
            .unwrap_or_else(|| format.default_context.clone());
        let mut event = Interaction::new(record.source.clone(), record.counterpart.as_str())
            .in_context(context)
            .with_weight(record_weight(&record, format));
        event.timestamp = record.timestamp;
        if let Err(err) = event.validate() {
            let err = Error::Parse {
                line: record.line,
                reason: err.to_string(),
            };
            match policy {
                MalformedPolicy::Fail => return Err(err),
                MalformedPolicy::Skip => {
                    skipped.push(SkippedLine {
                        line: record.line,
                        reason: err.to_string(),
                    });
                    continue;
                }
            }
        }
        builder.add_interaction(event)?;
    }

    let mut store = builder.build();
    if store.ledger().is_empty() {
        return Err(Error::EmptyInput);
    }
    store.set_metadata(StoreMetadata {
        format: format.describe(),
        ..StoreMetadata::default()
    });
    skipped.sort_by_key(|s| s.line);
    Ok(Ingested { store, skipped })
}

/// Projects a bipartite (user, thread) post log into a user->user store.
pub fn project_bipartite<R: BufRead>(
    reader: R,
    format: &FormatSpec,
    rule: ProjectionRule,
    policy: MalformedPolicy,
) -> Result<Ingested> {
    if !format.is_bipartite() {
        return Err(Error::InvalidFormat(
            "bipartite projection needs a thread column in the format".to_string(),
        ));
    }
    let (mut posts, skipped) = read_records(reader, format, policy)?;
    if posts.is_empty() {
        return Err(Error::EmptyInput);
    }

    if rule == ProjectionRule::PriorPosters && format.has_timestamp() {
        let stamped = posts.iter().filter(|p| p.timestamp.is_some()).count();
        if stamped == posts.len() {
            // stable: file order breaks timestamp ties
            posts.sort_by_key(|p| p.timestamp);
        } else if stamped > 0 {
            return Err(Error::MissingOrder);
        }
        // no timestamps at all: file order is the ordering
    }

    let mut builder = StoreBuilder::new().default_context(format.default_context.clone());
    for post in &posts {
        builder.add_member(post.source.clone());
    }

    match rule {
        ProjectionRule::PriorPosters => {
            use std::collections::BTreeMap;
            let mut prior: BTreeMap<&str, Vec<&MemberId>> = BTreeMap::new();
            for post in &posts {
                let seen = prior.entry(post.counterpart.as_str()).or_default();
                for &other in seen.iter() {
                    if *other != post.source {
                        let mut event = Interaction::new(post.source.clone(), other.clone())
                            .in_context(post.context.clone().unwrap_or_else(|| {
                                format.default_context.clone()
                            }))
                            .with_weight(record_weight(post, format));
                        event.timestamp = post.timestamp;
                        builder.add_interaction(event)?;
                    }
                }
                if !seen.contains(&&post.source) {
                    seen.push(&post.source);
                }
            }
        }
        ProjectionRule::AllCoposters => {
            use std::collections::{BTreeMap, BTreeSet};
            let mut posters: BTreeMap<&str, BTreeSet<&MemberId>> = BTreeMap::new();
            for post in &posts {
                posters
                    .entry(post.counterpart.as_str())
                    .or_default()
                    .insert(&post.source);
            }
            for post in &posts {
                for &other in &posters[post.counterpart.as_str()] {
                    if *other != post.source {
                        let mut event = Interaction::new(post.source.clone(), other.clone())
                            .in_context(post.context.clone().unwrap_or_else(|| {
                                format.default_context.clone()
                            }))
                            .with_weight(record_weight(post, format));
                        event.timestamp = post.timestamp;
                        builder.add_interaction(event)?;
                    }
                }
            }
        }
    }

    let mut store = builder.build();
    store.set_metadata(StoreMetadata {
        format: format.describe(),
        projection_rule: Some(rule.to_string()),
        ..StoreMetadata::default()
    });
    Ok(Ingested { store, skipped })
}
