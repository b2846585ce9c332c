//! Tabular CSV output with `#` provenance lines.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Formats a number so identical inputs give identical text: shortest
/// round-trip digits, scientific notation outside `[1e-4, 1e15)`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub struct Table {
    provenance: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// Starts a table for `command`, recording the tool version and the
    /// effective configuration as JSON.
    pub fn new<C: Serialize>(command: &str, config: &C, header: &[&str]) -> Result<Self> {
        let provenance = vec![
            format!("tool: sfg {}", env!("CARGO_PKG_VERSION")),
            format!("command: {command}"),
            format!("config: {}", serde_json::to_string(config)?),
        ];
        Ok(Self { provenance, header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() })
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.provenance.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for line in &self.provenance {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        self.write_to(BufWriter::new(file))
    }
}
