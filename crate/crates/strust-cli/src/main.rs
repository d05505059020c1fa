//! Command-line pipeline over the strust library.
//!
//! Exit codes are a stable contract: 0 success, 2 input/parse problems,
//! 3 store-load problems, 4 argument-domain problems.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "strust", version, about = "Social trust analytics over interaction logs")]
struct Cli {
    #[command(flatten)]
    globals: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat key=value config file; flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Input file: raw dataset for `ingest`, canonical store JSON otherwise
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Directory all output files land in
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Weight of popularity trust in the social blend, in [0, 1]
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Column order of the input, e.g. source,target,weight,timestamp or
    /// user,thread,timestamp
    #[arg(long, global = true)]
    format: Option<String>,
    /// Field delimiter: whitespace or comma
    #[arg(long, global = true)]
    delimiter: Option<String>,
    /// Leading lines to skip (0 or 1)
    #[arg(long, global = true)]
    header_lines: Option<usize>,
    /// Context assigned to events without a context column
    #[arg(long, global = true)]
    context: Option<String>,
    /// Projection rule for two-mode input: prior-posters or all-coposters
    #[arg(long, global = true)]
    projection: Option<String>,
    /// Count a weight-w line as w activities (default) or as one
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    expand_weights: Option<bool>,
    /// Skip malformed lines instead of failing the ingest
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    skip_bad_lines: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dataset into the canonical store JSON and print its summary
    Ingest,
    /// Emit popularity/engagement/social rankings and community trust
    Trust {
        /// Preview the top K rows of each ranking on stdout
        #[arg(long)]
        top: Option<usize>,
    },
    /// Recommend leaders and mentors and emit the top-K overlap curve
    Roles {
        /// How many leaders/mentors to recommend
        #[arg(long)]
        k: usize,
        /// Upper K of the overlap curve
        #[arg(long, default_value_t = 20)]
        overlap_kmax: usize,
    },
    /// Remove top-ranked members and measure trust and capital loss
    Sustain {
        /// Ranking that drives removal: popularity, engagement, social, all
        #[arg(long, default_value = "all")]
        kind: String,
        /// Comma-separated removal percentages
        #[arg(long, default_value = "5,10,15")]
        percents: String,
    },
    /// Export one member's ego network as DOT
    Ego {
        #[arg(long)]
        member: String,
        /// engagement (outward edges) or popularity (inward edges)
        #[arg(long)]
        mode: String,
    },
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new(2, message)
    }

    pub fn store(message: impl Into<String>) -> Self {
        CliError::new(3, message)
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError::new(4, message)
    }
}

fn main() {
    let cli = Cli::parse();
    let config = match RunConfig::resolve(&cli.globals) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {}", err.message);
            process::exit(err.code);
        }
    };
    let result = match cli.command {
        Command::Ingest => commands::cmd_ingest(&config),
        Command::Trust { top } => commands::cmd_trust(&config, top),
        Command::Roles { k, overlap_kmax } => commands::cmd_roles(&config, k, overlap_kmax),
        Command::Sustain { kind, percents } => commands::cmd_sustain(&config, &kind, &percents),
        Command::Ego { member, mode } => commands::cmd_ego(&config, &member, &mode),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message);
        process::exit(err.code);
    }
}
