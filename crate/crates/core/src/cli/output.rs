//! CSV tables and the JSON run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Column-oriented table written as CSV with a header row.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects the files of one run and writes them with a manifest.
pub struct RunOutput {
    dir: PathBuf,
    files: BTreeMap<String, String>,
    extra: BTreeMap<String, Value>,
}

impl RunOutput {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(RunOutput {
            dir: dir.to_path_buf(),
            files: BTreeMap::new(),
            extra: BTreeMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path)?;
        f.write_all(contents.as_bytes())?;
        self.files.insert(name.to_string(), hex_sha256(contents.as_bytes()));
        Ok(())
    }

    pub fn write_table(&mut self, name: &str, table: &Table) -> Result<()> {
        self.write(name, &table.to_csv())
    }

    /// Pretty, key-sorted JSON file.
    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<()> {
        let mut s = serde_json::to_string_pretty(&sort_keys(value))?;
        s.push('\n');
        self.write(name, &s)
    }

    /// Adds an entry to the manifest's `results` block.
    pub fn note(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    /// Writes `config.txt` (the resolved configuration) and `manifest.json`.
    pub fn finish(
        mut self,
        command: &str,
        config_text: &str,
        file_bytes: &[u8],
        resolved: &BTreeMap<String, String>,
        wall_clock: f64,
    ) -> Result<PathBuf> {
        self.write("config.txt", config_text)?;
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update([0]);
        hasher.update(config_text.as_bytes());
        let resolved_hash: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
        let manifest = json!({
            "artifact": env!("CARGO_PKG_NAME"),
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": resolved,
            "input_hashes": {
                "resolved_config_sha256": resolved_hash,
                "config_file_sha256": if file_bytes.is_empty() { Value::Null } else { Value::String(hex_sha256(file_bytes)) },
            },
            "outputs": self.files,
            "results": self.extra,
            "wall_clock_seconds": wall_clock,
        });
        let path = self.dir.join("manifest.json");
        let mut s = serde_json::to_string_pretty(&sort_keys(&manifest))?;
        s.push('\n');
        fs::write(&path, s)?;
        Ok(path)
    }
}

/// Recursively rebuilds objects so keys come out sorted regardless of how
/// serde_json orders its maps.
pub fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let sorted: BTreeMap<&String, Value> = m.iter().map(|(k, v)| (k, sort_keys(v))).collect();
            let mut out = serde_json::Map::new();
            for (k, v) in sorted {
                out.insert(k.clone(), v);
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

/// Shortest round-trip formatting of a float.
pub fn fmt(x: f64) -> String {
    format!("{x}")
}
