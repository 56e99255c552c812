use std::fmt;
use std::fs;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use torsionlab::ingest::IngestError;
use torsionlab::perm::EnumerationMode;

use crate::Global;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Copy, Clone, Debug, clap::ValueEnum)]
pub enum Mode {
    Literal,
    /// Up to the normalizer-wreath symmetry.
    Symmetry,
}

impl From<Mode> for EnumerationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Literal => EnumerationMode::Literal,
            Mode::Symmetry => EnumerationMode::UpToSymmetry,
        }
    }
}

/// Input-format failures exit with 2, everything else with 1.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(ie) = cause.downcast_ref::<IngestError>() {
            return match ie {
                IngestError::Group(_) => 1,
                _ => 2,
            };
        }
    }
    1
}

/// Collects the human table, the JSON value and optional CSV rows of one
/// command, and writes whichever the flags ask for.
pub struct Output {
    global: Global,
    rows: Vec<(String, String)>,
    json: Option<Value>,
    csv: Option<String>,
}

impl Output {
    pub fn new(global: Global) -> Self {
        Self {
            global,
            rows: Vec::new(),
            json: None,
            csv: None,
        }
    }

    pub fn global(&self) -> &Global {
        &self.global
    }

    /// One `key  value` row of the human table.
    pub fn row(&mut self, key: &str, value: impl fmt::Display) {
        self.rows.push((key.to_string(), value.to_string()));
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        self.json = Some(serde_json::to_value(value)?);
        Ok(())
    }

    pub fn csv(&mut self, header: &[&str], records: impl IntoIterator<Item = Vec<String>>) {
        let mut text = header.join(",");
        text.push('\n');
        for r in records {
            text.push_str(&r.join(","));
            text.push('\n');
        }
        self.csv = Some(text);
    }

    pub fn csv_text(&mut self, text: String) {
        self.csv = Some(text);
    }

    pub fn finish(&mut self) -> Result<()> {
        if self.global.json {
            let v = self.json.take().unwrap_or(Value::Null);
            println!("{}", serde_json::to_string_pretty(&v)?);
        } else {
            let width = self.rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
            for (k, v) in &self.rows {
                println!("{k:<width$}  {v}");
            }
        }
        if let Some(path) = &self.global.csv {
            let text = self.csv.take().unwrap_or_default();
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

/// Accepts `10000000000`, `1e10` or `1.5e3` as long as the value is a
/// non-negative integer.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if f < 0.0 || f.fract() != 0.0 || f > u64::MAX as f64 {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(f as u64)
}

pub fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
