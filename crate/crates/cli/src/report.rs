//! Rendering of command results as JSON, CSV or an aligned text table.

use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};

/// Flat view of a report for CSV and text output.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().context("flushing csv")
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(self.header.clone());
        out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect());
        for r in &self.rows {
            out += &line(r.iter().map(|s| s.as_str()).collect());
        }
        out
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: &'a T,
}

/// One JSON document holding the config and the body.
pub fn json_document<T: Serialize>(command: &str, cfg: &RunConfig, body: &T) -> Result<Value> {
    Ok(serde_json::to_value(Envelope { command, config: cfg, body })?)
}

/// Write a report in the configured format. `records` become JSON lines.
pub fn emit(cfg: &RunConfig, records: &[Value], table: &Table) -> Result<()> {
    let bytes = match cfg.format {
        Format::Json => {
            let mut out = Vec::new();
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.push(b'\n');
            }
            out
        }
        Format::Csv => {
            let mut out = format!("# config: {}\n", serde_json::to_string(cfg)?).into_bytes();
            out.extend(table.csv()?);
            out
        }
        Format::TextTable => {
            let mut out = format!("config: {}\n\n", serde_json::to_string(cfg)?);
            out += &table.text();
            out.into_bytes()
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&bytes)?;
            Ok(lock.flush()?)
        }
    }
}
