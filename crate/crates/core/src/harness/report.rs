//! Report serialization.
//!
//! JSON is the full report, pretty-printed with a trailing newline. CSV has
//! one row per trial and color: `trial,seed,color,attained,witness`, where
//! `witness` is the compact JSON array of operands or empty.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::coverage::CoverageReport;
use crate::error::{Error, Result};

/// Output encoding of [`report_write`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format '{other}'"))),
        }
    }
}

/// The report as JSON text.
pub fn report_json(report: &CoverageReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::Serialization(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// The report as CSV text.
pub fn report_csv(report: &CoverageReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    writer.write_record(["trial", "seed", "color", "attained", "witness"]).map_err(ser)?;
    for trial in &report.trials {
        for color in 0..report.config.colors {
            let witness = trial
                .witnesses
                .iter()
                .find(|w| w.color == color)
                .map(|w| serde_json::Value::Array(w.operands.clone()).to_string())
                .unwrap_or_default();
            writer
                .write_record([
                    trial.trial.to_string(),
                    trial.seed.to_string(),
                    color.to_string(),
                    trial.attained.contains(&color).to_string(),
                    witness,
                ])
                .map_err(ser)?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

/// Writes `report` to `path`.
pub fn report_write(report: &CoverageReport, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Json => report_json(report)?,
        ReportFormat::Csv => report_csv(report)?,
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads a JSON report back.
pub fn report_read(path: &Path) -> Result<CoverageReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Serialization(format!("{}: {e}", path.display())))
}
