//! Output writing: every emitted file carries a metadata block with the
//! tool version, the resolved configuration, and the input content hash.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct Meta {
    pub tool_version: String,
    pub config: String,
    pub input_sha256: String,
}

impl Meta {
    pub fn new(config_echo: String, input_sha256: String) -> Self {
        Meta {
            tool_version: crate::config::TOOL_VERSION.to_string(),
            config: config_echo,
            input_sha256,
        }
    }

    /// Comment block for line-oriented formats; `prefix` is `#` for CSV and
    /// `//` for DOT.
    pub fn comment_block(&self, prefix: &str) -> String {
        format!(
            "{prefix} tool_version={}\n{prefix} config={}\n{prefix} input_sha256={}\n",
            self.tool_version, self.config, self.input_sha256
        )
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::json!({
            "tool_version": self.tool_version,
            "config": self.config,
            "input_sha256": self.input_sha256,
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::store(format!("cannot create {}: {e}", parent.display())))?;
    }
    fs::write(path, content)
        .map_err(|e| CliError::store(format!("cannot write {}: {e}", path.display())))
}

/// CSV with a metadata comment block, a header row, and stringified rows.
pub fn write_csv(
    path: &Path,
    meta: &Meta,
    header: &str,
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let mut text = meta.comment_block("#");
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_file(path, &text)
}

/// Pretty JSON with the metadata object attached under `metadata`.
pub fn write_json(
    path: &Path,
    meta: &Meta,
    mut value: serde_json::Value,
) -> Result<(), CliError> {
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("metadata".to_string(), meta.json());
    }
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| CliError::store(format!("serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_file(path, &text)
}
