//! The five pipeline commands.

use std::fs;
use std::io::Cursor;
use std::path::PathBuf;

use strust::{
    ego_network, project_bipartite, rank, run_removal, topk_overlap, Alpha, Delimiter, EgoMode,
    Error, FormatSpec, Ingested, InteractionStore, MalformedPolicy, ProjectionRule, RankKind,
    Ranking, RemovalReport, RemovalSpec, StoreMetadata, TrustEngine,
};

use crate::config::{RunConfig, TOOL_VERSION};
use crate::output::{sha256_hex, write_csv, write_file, write_json, Meta};
use crate::CliError;

fn build_format(config: &RunConfig) -> Result<FormatSpec, CliError> {
    let delimiter = match config.delimiter.as_str() {
        "whitespace" => Delimiter::Whitespace,
        "comma" => Delimiter::Comma,
        other => {
            return Err(CliError::input(format!(
                "unknown delimiter `{other}` (expected whitespace or comma)"
            )))
        }
    };
    if config.header_lines > 1 {
        return Err(CliError::input("header-lines must be 0 or 1"));
    }
    let spec = FormatSpec {
        delimiter,
        header_lines: config.header_lines,
        default_context: config.context.as_str().into(),
        expand_weights: config.expand_weights,
        ..FormatSpec::default()
    };
    spec.with_columns(&config.format)
        .map_err(|e| CliError::input(e.to_string()))
}

fn input_path(config: &RunConfig) -> Result<&PathBuf, CliError> {
    config
        .input
        .as_ref()
        .ok_or_else(|| CliError::input("--input is required"))
}

pub fn cmd_ingest(config: &RunConfig) -> Result<(), CliError> {
    let path = input_path(config)?;
    let bytes = fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let input_sha256 = sha256_hex(&bytes);
    let format = build_format(config)?;
    let policy = if config.skip_bad_lines {
        MalformedPolicy::Skip
    } else {
        MalformedPolicy::Fail
    };

    let ingested: Ingested = if format.is_bipartite() {
        let rule_name = config.projection.as_deref().ok_or_else(|| {
            CliError::input("two-mode input (thread column) requires --projection")
        })?;
        let rule = ProjectionRule::parse(rule_name).map_err(|e| CliError::input(e.to_string()))?;
        project_bipartite(Cursor::new(&bytes), &format, rule, policy)
            .map_err(|e| CliError::input(e.to_string()))?
    } else {
        if config.projection.is_some() {
            return Err(CliError::input(
                "--projection needs a thread column in --format",
            ));
        }
        ingest_with_input_errors(Cursor::new(&bytes), &format, policy)?
    };

    for skip in &ingested.skipped {
        eprintln!("warning: skipped {}", skip.reason);
    }
    if !ingested.skipped.is_empty() {
        eprintln!("warning: {} line(s) skipped", ingested.skipped.len());
    }

    let mut store = ingested.store;
    let lib_meta = store.metadata().clone();
    store.set_metadata(StoreMetadata {
        source_file: path.display().to_string(),
        tool_version: TOOL_VERSION.to_string(),
        input_sha256: input_sha256.clone(),
        config: Some(config.echo()),
        ..lib_meta
    });

    let store_path = config.out_dir.join("store.json");
    if let Some(parent) = store_path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::store(format!("cannot create {}: {e}", parent.display())))?;
    }
    store
        .save_json(&store_path)
        .map_err(|e| CliError::store(e.to_string()))?;

    let capital = store.social_capital();
    println!(
        "{}",
        serde_json::json!({
            "members": store.member_count(),
            "total_interactions": capital.total,
            "unique_interactions": capital.unique,
        })
    );
    Ok(())
}

fn ingest_with_input_errors(
    reader: Cursor<&Vec<u8>>,
    format: &FormatSpec,
    policy: MalformedPolicy,
) -> Result<Ingested, CliError> {
    strust::ingest_edge_list(reader, format, policy).map_err(|e| match e {
        Error::Parse { .. } | Error::EmptyInput | Error::InvalidFormat(_) | Error::Io(_) => {
            CliError::input(e.to_string())
        }
        other => CliError::input(other.to_string()),
    })
}

/// Loads the canonical store JSON named by --input. Anything that prevents
/// the load exits with code 3.
fn load_store(config: &RunConfig) -> Result<(InteractionStore, Meta), CliError> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::store("--input must name a store JSON file"))?;
    let bytes = fs::read(path)
        .map_err(|e| CliError::store(format!("cannot read store {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::store(format!("store {} is not UTF-8: {e}", path.display())))?;
    let store = InteractionStore::from_json(&text)
        .map_err(|e| CliError::store(format!("store {}: {e}", path.display())))?;
    let meta = Meta::new(config.echo(), sha256_hex(&bytes));
    Ok((store, meta))
}

fn alpha_arg(config: &RunConfig) -> Result<Alpha, CliError> {
    Alpha::new(config.alpha).map_err(|e| CliError::domain(e.to_string()))
}

fn ranking_rows(ranking: &Ranking) -> Vec<Vec<String>> {
    ranking
        .entries
        .iter()
        .enumerate()
        .map(|(idx, entry)| {
            vec![
                entry.member.to_string(),
                entry.score.to_string(),
                (idx + 1).to_string(),
            ]
        })
        .collect()
}

pub fn cmd_trust(config: &RunConfig, top: Option<usize>) -> Result<(), CliError> {
    let (store, meta) = load_store(config)?;
    let alpha = alpha_arg(config)?;

    let rankings = [
        ("ranking-popularity.csv", rank(&store, RankKind::Popularity)),
        ("ranking-engagement.csv", rank(&store, RankKind::Engagement)),
        ("ranking-social.csv", rank(&store, RankKind::Social(alpha))),
    ];
    for (file, ranking) in &rankings {
        write_csv(
            &config.out_dir.join(file),
            &meta,
            "member,score,rank",
            ranking_rows(ranking),
        )?;
    }

    let community = TrustEngine::new(&store).strust_community(alpha);
    let value = serde_json::to_value(community)
        .map_err(|e| CliError::store(format!("serialize community trust: {e}")))?;
    write_json(&config.out_dir.join("community.json"), &meta, value)?;

    println!(
        "community social trust {} (alpha={}, trust community: {})",
        community.value, community.alpha, community.is_trust_community
    );
    if let Some(top) = top {
        for (file, ranking) in &rankings {
            let label = file
                .trim_start_matches("ranking-")
                .trim_end_matches(".csv");
            println!("top {top} by {label}:");
            for (idx, entry) in ranking.top(top).enumerate() {
                println!("  {}. {} {}", idx + 1, entry.member, entry.score);
            }
        }
    }
    Ok(())
}

fn domain_err(e: Error) -> CliError {
    CliError::domain(e.to_string())
}

pub fn cmd_roles(config: &RunConfig, k: usize, overlap_kmax: usize) -> Result<(), CliError> {
    let (store, meta) = load_store(config)?;
    let m = store.member_count();
    if k == 0 || k > m {
        return Err(CliError::domain(format!(
            "k={k} outside valid range 1..={m}"
        )));
    }

    let leaders = rank(&store, RankKind::Popularity);
    let mentors = rank(&store, RankKind::Engagement);
    let top_rows = |ranking: &Ranking| {
        ranking
            .entries
            .iter()
            .take(k)
            .enumerate()
            .map(|(idx, e)| {
                vec![
                    e.member.to_string(),
                    e.score.to_string(),
                    (idx + 1).to_string(),
                ]
            })
            .collect::<Vec<_>>()
    };
    write_csv(
        &config.out_dir.join("leaders.csv"),
        &meta,
        "member,score,rank",
        top_rows(&leaders),
    )?;
    write_csv(
        &config.out_dir.join("mentors.csv"),
        &meta,
        "member,score,rank",
        top_rows(&mentors),
    )?;

    let overlap = topk_overlap(&store, overlap_kmax).map_err(domain_err)?;
    write_csv(
        &config.out_dir.join("overlap.csv"),
        &meta,
        "k,overlap",
        overlap
            .iter()
            .map(|p| vec![p.k.to_string(), p.overlap.to_string()]),
    )?;

    let names = |ranking: &Ranking| {
        ranking
            .top(k)
            .map(|e| e.member.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("leaders (top {k} by popularity): {}", names(&leaders));
    println!("mentors (top {k} by engagement): {}", names(&mentors));
    println!(
        "overlap at k={}: {}",
        overlap_kmax,
        overlap.last().map(|p| p.overlap).unwrap_or(0)
    );
    Ok(())
}

fn kind_slug(kind: RankKind) -> &'static str {
    match kind {
        RankKind::Popularity => "popularity",
        RankKind::Engagement => "engagement",
        RankKind::Social(_) => "social",
    }
}

fn curve_rows(reports: &[RemovalReport]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for report in reports {
        let mut push = |metric: &str, value: f64| {
            rows.push(vec![
                report.percent.to_string(),
                metric.to_string(),
                value.to_string(),
            ]);
        };
        if let Some(drop) = report.trust_drop_pct {
            push("trust_drop_pct", drop);
        }
        push("capital_drop_pct", report.capital_drop_pct);
        push("unique_drop_pct", report.unique_drop_pct);
        push("gap_pct", report.gap_pct);
        push("interactions_reduced_pct", report.interactions_reduced_pct);
        push("drop_difference_pct", report.drop_difference_pct);
    }
    rows
}

fn nested(reports: &[RemovalReport]) -> bool {
    reports
        .windows(2)
        .all(|w| w[0].removed.is_subset(&w[1].removed))
}

pub fn cmd_sustain(config: &RunConfig, kind: &str, percents: &str) -> Result<(), CliError> {
    let (store, meta) = load_store(config)?;
    let alpha = alpha_arg(config)?;

    let percents: Vec<f64> = percents
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::domain(format!("bad percent `{p}`")))
        })
        .collect::<Result<_, _>>()?;

    let kinds: Vec<RankKind> = match kind {
        "popularity" => vec![RankKind::Popularity],
        "engagement" => vec![RankKind::Engagement],
        "social" => vec![RankKind::Social(alpha)],
        "all" => vec![
            RankKind::Popularity,
            RankKind::Engagement,
            RankKind::Social(alpha),
        ],
        other => {
            return Err(CliError::domain(format!(
                "unknown kind `{other}` (expected popularity, engagement, social, all)"
            )))
        }
    };

    for kind in kinds {
        let spec = RemovalSpec::new(kind, percents.clone()).map_err(domain_err)?;
        let reports = run_removal(&store, &spec, alpha).map_err(domain_err)?;
        let slug = kind_slug(kind);

        let value = serde_json::json!({
            "dataset": store.metadata().source_file,
            "kind": kind.to_string(),
            "alpha": alpha.value(),
            "nested_removals": nested(&reports),
            "runs": serde_json::to_value(&reports)
                .map_err(|e| CliError::store(format!("serialize reports: {e}")))?,
        });
        write_json(
            &config.out_dir.join(format!("sustain-{slug}.json")),
            &meta,
            value,
        )?;
        write_csv(
            &config.out_dir.join(format!("curves-{slug}.csv")),
            &meta,
            "percent,metric,value",
            curve_rows(&reports),
        )?;

        for report in &reports {
            let trust_drop = report
                .trust_drop_pct
                .map(|d| format!("{d:.2}"))
                .unwrap_or_else(|| "n/a".to_string());
            println!(
                "{slug}: {}% removed -> trust drop {trust_drop}%, capital drop {:.2}%, gap {:.2}%, drop difference {:.2}%",
                report.percent,
                report.capital_drop_pct,
                report.gap_pct,
                report.drop_difference_pct,
            );
        }
    }
    Ok(())
}

fn file_slug(raw: &str) -> String {
    raw.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn cmd_ego(config: &RunConfig, member: &str, mode: &str) -> Result<(), CliError> {
    let (store, meta) = load_store(config)?;
    let mode = match mode {
        "engagement" => EgoMode::Engagement,
        "popularity" => EgoMode::Popularity,
        other => {
            return Err(CliError::domain(format!(
                "unknown mode `{other}` (expected engagement or popularity)"
            )))
        }
    };
    let dot = ego_network(&store, &member.into(), mode).map_err(domain_err)?;
    let path = config
        .out_dir
        .join(format!("ego-{}-{mode}.dot", file_slug(member)));
    let content = format!("{}{dot}", meta.comment_block("//"));
    write_file(&path, &content)?;
    println!("wrote {}", path.display());
    Ok(())
}
