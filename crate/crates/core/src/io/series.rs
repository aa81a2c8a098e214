use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use super::config::{parse_config_str, RunConfig};
use crate::error::{Error, Result};

/// Version string written into every output file.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Provenance block written as `# key: value` lines ahead of the CSV body.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMetadata {
    pub config: RunConfig,
    pub version: String,
    pub partition_hash: String,
    /// Seconds since the Unix epoch.
    pub created: u64,
}

impl SeriesMetadata {
    pub fn new(config: &RunConfig, partition_hash: String) -> Self {
        Self {
            config: config.clone(),
            version: CODE_VERSION.to_string(),
            partition_hash,
            created: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// A CSV table with its metadata. Rows are kept preformatted so the body
/// bytes depend only on the computed values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub metadata: SeriesMetadata,
    pub header: String,
    pub rows: Vec<String>,
    /// Set when the run stopped on a numerical failure.
    pub abort: Option<String>,
}

impl DiagnosticSeries {
    pub fn new(metadata: SeriesMetadata, header: impl Into<String>) -> Self {
        Self {
            metadata,
            header: header.into(),
            rows: Vec::new(),
            abort: None,
        }
    }

    pub fn push(&mut self, row: String) {
        self.rows.push(row);
    }

    /// Header plus rows, without metadata.
    pub fn body(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let m = &self.metadata;
        let mut s = String::new();
        let _ = writeln!(s, "# version: {}", m.version);
        let _ = writeln!(s, "# created: {}", m.created);
        let _ = writeln!(s, "# partition_hash: {}", m.partition_hash);
        let _ = writeln!(s, "# filter: {}", m.config.filter);
        let _ = writeln!(
            s,
            "# zero_mode: {}",
            serde_json::to_string(&m.config.zero_mode)
                .unwrap()
                .trim_matches('"')
        );
        let _ = writeln!(s, "# config: {}", m.config.to_json());
        s.push_str(&self.body());
        if let Some(reason) = &self.abort {
            let _ = writeln!(s, "# abort: {reason}");
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (mut version, mut created, mut hash, mut config, mut abort) =
            (None, 0, None, None, None);
        let mut header = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(meta) = line.strip_prefix("# ") {
                let (key, value) = meta.split_once(": ").unwrap_or((meta, ""));
                match key {
                    "version" => version = Some(value.to_string()),
                    "created" => created = value.parse().unwrap_or(0),
                    "partition_hash" => hash = Some(value.to_string()),
                    "config" => config = Some(parse_config_str(value)?),
                    "abort" => abort = Some(value.to_string()),
                    _ => {}
                }
            } else if header.is_none() {
                header = Some(line.to_string());
            } else {
                rows.push(line.to_string());
            }
        }
        let missing = |what: &str| Error::config("series", format!("missing {what}"));
        Ok(Self {
            metadata: SeriesMetadata {
                config: config.ok_or_else(|| missing("config line"))?,
                version: version.ok_or_else(|| missing("version line"))?,
                partition_hash: hash.ok_or_else(|| missing("partition_hash line"))?,
                created,
            },
            header: header.ok_or_else(|| missing("header"))?,
            rows,
            abort,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Values of a named numeric column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.split(',').position(|h| h == name)?;
        self.rows
            .iter()
            .map(|r| r.split(',').nth(idx).and_then(|v| v.parse().ok()))
            .collect()
    }
}
