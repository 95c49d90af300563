//! Report rendering and writing.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use taumod::report::{CheckReport, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A finished report in both output forms.
pub trait Report {
    fn to_json(&self) -> anyhow::Result<String>;
    fn to_csv(&self) -> anyhow::Result<String>;
}

pub fn json_text<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn csv_text<T: Serialize>(rows: &[T]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes to `out`, or to stdout when absent.
pub fn write(report: &dyn Report, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let text = match format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// One flat CSV row per check; structured fields are embedded as JSON.
#[derive(Serialize)]
struct CheckRow<'a> {
    suite: &'a str,
    check: &'a str,
    passed: bool,
    residual: f64,
    tolerance: f64,
    inputs: String,
    expected: String,
    observed: String,
    convention: &'a str,
}

impl Report for SuiteReport {
    fn to_json(&self) -> anyhow::Result<String> {
        json_text(self)
    }

    fn to_csv(&self) -> anyhow::Result<String> {
        let rows: Vec<CheckRow> = self
            .checks
            .iter()
            .map(|c: &CheckReport| CheckRow {
                suite: &self.suite,
                check: &c.check,
                passed: c.passed,
                residual: c.residual,
                tolerance: c.tolerance,
                inputs: c.inputs.to_string(),
                expected: c.expected.to_string(),
                observed: c.observed.to_string(),
                convention: &c.convention,
            })
            .collect();
        csv_text(&rows)
    }
}
