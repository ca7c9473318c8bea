//! CSV report container.
//!
//! Layout: one `# config <sha256>` comment line, optional `# note ...`
//! lines, the header row, data rows, then `# key = value` summary lines.
//! All numbers are serialized with Rust's shortest round-trip formatting,
//! '.' radix, so identical runs produce byte-identical files.

use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct Report {
    pub config_hash: String,
    pub notes: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
}

impl Report {
    pub fn new(config_hash: String, header: &[&'static str]) -> Self {
        Self {
            config_hash,
            notes: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn push_summary(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# config ");
        out.push_str(&self.config_hash);
        out.push('\n');
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for (key, value) in &self.summary {
            out.push_str("# ");
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(value);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Shortest round-trip decimal form of a float.
pub fn fmt(v: f64) -> String {
    format!("{v}")
}
