//! Run configuration: defaults, key=value config files, and flag overrides.
//!
//! Precedence is flag > config file > default. The resolved configuration is
//! echoed verbatim into every report header; the echo itself parses back as
//! a config file, so runs are reproducible from their own outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use crate::{CliError, GlobalArgs};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub alpha: f64,
    pub format: String,
    pub delimiter: String,
    pub header_lines: usize,
    pub context: String,
    pub projection: Option<String>,
    pub expand_weights: bool,
    pub skip_bad_lines: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            out_dir: PathBuf::from("strust-out"),
            alpha: 0.5,
            format: "source,target,weight,timestamp".to_string(),
            delimiter: "whitespace".to_string(),
            header_lines: 0,
            context: "global".to_string(),
            projection: None,
            expand_weights: true,
            skip_bad_lines: false,
        }
    }
}

/// Parses flat key=value text. Pairs are separated by newlines or `;`;
/// blank lines and `#` comments are ignored. An empty value clears the key.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for raw in text.split(['\n', ';']) {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{line}`"))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: [&str; 10] = [
    "input",
    "out_dir",
    "alpha",
    "format",
    "delimiter",
    "header_lines",
    "context",
    "projection",
    "expand_weights",
    "skip_bad_lines",
];

impl RunConfig {
    /// Builds the effective configuration from flags and the optional
    /// config file.
    pub fn resolve(globals: &GlobalArgs) -> Result<RunConfig, CliError> {
        let file = match &globals.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::input(format!("cannot read config {}: {e}", path.display()))
                })?;
                let map = parse_kv(&text)
                    .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))?;
                for key in map.keys() {
                    if !KNOWN_KEYS.contains(&key.as_str()) {
                        return Err(CliError::input(format!(
                            "config {}: unknown key `{key}`",
                            path.display()
                        )));
                    }
                }
                map
            }
            None => BTreeMap::new(),
        };
        RunConfig::from_sources(globals, &file)
    }

    fn from_sources(
        globals: &GlobalArgs,
        file: &BTreeMap<String, String>,
    ) -> Result<RunConfig, CliError> {
        let defaults = RunConfig::default();
        let nonempty = |key: &str| file.get(key).filter(|v| !v.is_empty());

        let input = globals
            .input
            .clone()
            .or_else(|| nonempty("input").map(PathBuf::from));
        let out_dir = globals
            .out_dir
            .clone()
            .or_else(|| nonempty("out_dir").map(PathBuf::from))
            .unwrap_or(defaults.out_dir);
        let alpha = match (globals.alpha, nonempty("alpha")) {
            (Some(a), _) => a,
            (None, Some(v)) => v
                .parse()
                .map_err(|_| CliError::input(format!("config: bad alpha `{v}`")))?,
            (None, None) => defaults.alpha,
        };
        let format = globals
            .format
            .clone()
            .or_else(|| nonempty("format").cloned())
            .unwrap_or(defaults.format);
        let delimiter = globals
            .delimiter
            .clone()
            .or_else(|| nonempty("delimiter").cloned())
            .unwrap_or(defaults.delimiter);
        let header_lines = match (globals.header_lines, nonempty("header_lines")) {
            (Some(h), _) => h,
            (None, Some(v)) => v
                .parse()
                .map_err(|_| CliError::input(format!("config: bad header_lines `{v}`")))?,
            (None, None) => defaults.header_lines,
        };
        let context = globals
            .context
            .clone()
            .or_else(|| nonempty("context").cloned())
            .unwrap_or(defaults.context);
        let projection = globals
            .projection
            .clone()
            .or_else(|| nonempty("projection").cloned());
        let parse_bool = |key: &str, v: &str| -> Result<bool, CliError> {
            match v {
                "true" | "1" => Ok(true),
                "false" | "0" => Ok(false),
                other => Err(CliError::input(format!("config: bad {key} `{other}`"))),
            }
        };
        let expand_weights = match (globals.expand_weights, nonempty("expand_weights")) {
            (Some(b), _) => b,
            (None, Some(v)) => parse_bool("expand_weights", v)?,
            (None, None) => defaults.expand_weights,
        };
        let skip_bad_lines = match (globals.skip_bad_lines, nonempty("skip_bad_lines")) {
            (Some(b), _) => b,
            (None, Some(v)) => parse_bool("skip_bad_lines", v)?,
            (None, None) => defaults.skip_bad_lines,
        };

        Ok(RunConfig {
            input,
            out_dir,
            alpha,
            format,
            delimiter,
            header_lines,
            context,
            projection,
            expand_weights,
            skip_bad_lines,
        })
    }

    /// One-line echo of the resolved configuration, itself valid config-file
    /// content.
    pub fn echo(&self) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        format!(
            "alpha={};context={};delimiter={};expand_weights={};format={};header_lines={};input={};out_dir={};projection={};skip_bad_lines={}",
            self.alpha,
            self.context,
            self.delimiter,
            self.expand_weights,
            self.format,
            self.header_lines,
            path(&self.input),
            self.out_dir.display(),
            self.projection.clone().unwrap_or_default(),
            self.skip_bad_lines,
        )
    }

    /// Reconstructs a configuration from echoed text (no flag overrides).
    #[cfg(test)]
    pub fn from_echo(text: &str) -> Result<RunConfig, CliError> {
        let map = parse_kv(text).map_err(CliError::input)?;
        let no_flags = GlobalArgs {
            config: None,
            input: None,
            out_dir: None,
            alpha: None,
            format: None,
            delimiter: None,
            header_lines: None,
            context: None,
            projection: None,
            expand_weights: None,
            skip_bad_lines: None,
        };
        RunConfig::from_sources(&no_flags, &map)
    }
}
