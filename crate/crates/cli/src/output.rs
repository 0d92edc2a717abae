//! CSV emission and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A CSV document: `#` comment lines, a header row, then data rows.
#[derive(Debug, Clone)]
pub struct Csv {
    header: Vec<&'static str>,
    comments: Vec<String>,
    rows: Vec<Vec<String>>,
    trailer: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Csv {
            header: header.to_vec(),
            comments: Vec::new(),
            rows: Vec::new(),
            trailer: Vec::new(),
        }
    }

    /// Comment placed above the header.
    pub fn comment(&mut self, text: impl Into<String>) -> &mut Self {
        self.comments.push(text.into());
        self
    }

    /// Comment placed after the last row.
    pub fn trailer(&mut self, text: impl Into<String>) -> &mut Self {
        self.trailer.push(text.into());
        self
    }

    pub fn row(&mut self, fields: Vec<String>) -> &mut Self {
        assert_eq!(fields.len(), self.header.len(), "row width must match header");
        self.rows.push(fields);
        self
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        for c in &self.trailer {
            let _ = writeln!(s, "# {c}");
        }
        s
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    /// Every key after defaults, enough to rerun the command.
    pub config: BTreeMap<String, String>,
    pub workers: usize,
    pub out: PathBuf,
    /// Derived seeds per stream label, in realization order.
    pub derived_seeds: BTreeMap<String, Vec<u64>>,
    pub duration_seconds: f64,
    /// File name to SHA-256 of its bytes.
    pub outputs: BTreeMap<String, String>,
    pub results: serde_json::Value,
}

impl RunManifest {
    pub fn read(path: &Path) -> std::io::Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}

/// Collects outputs of one run.
#[derive(Debug)]
pub struct RunContext {
    pub out: PathBuf,
    pub outputs: BTreeMap<String, String>,
    pub derived_seeds: BTreeMap<String, Vec<u64>>,
    pub results: serde_json::Map<String, serde_json::Value>,
}

impl RunContext {
    pub fn new(out: PathBuf) -> std::io::Result<Self> {
        fs::create_dir_all(&out)?;
        Ok(RunContext {
            out,
            outputs: BTreeMap::new(),
            derived_seeds: BTreeMap::new(),
            results: serde_json::Map::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        fs::write(self.out.join(name), contents)?;
        self.outputs.insert(name.to_string(), sha256_hex(contents.as_bytes()));
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, csv: &Csv) -> std::io::Result<()> {
        self.write(name, &csv.render())
    }

    pub fn result(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.results.insert(key.to_string(), value.into());
    }
}
