//! Result files.
//!
//! JSON: the full [`ExperimentReport`]. Top-level fields are `config`,
//! `results` (one entry per SNR with `snr_db`, `trials`, `ub`, `methods`
//! keyed by method name, each holding `per`, `rmse`, `exact`, `failures`,
//! and `errors`) and, with per-trial output enabled, `trials`. Timing is
//! left out so that identical runs give identical files.
//!
//! CSV: one row per method and SNR with columns
//! `method,snr_db,per,rmse,ub,wall_ms`. Empty cells mean "not available".

use std::path::Path;

use serde::Serialize;

use super::runner::ExperimentReport;
use crate::error::{Error, Result};

#[derive(Serialize)]
struct CsvRow<'a> {
    method: &'a str,
    snr_db: f64,
    per: f64,
    rmse: Option<f64>,
    ub: Option<f64>,
    wall_ms: f64,
}

pub fn to_json(report: &ExperimentReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_csv(report: &ExperimentReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.results {
        for (method, m) in &r.methods {
            w.serialize(CsvRow {
                method: method.name(),
                snr_db: r.snr_db,
                per: m.per,
                rmse: m.rmse,
                ub: r.ub,
                wall_ms: m.wall_ms,
            })
            .map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Writes the JSON report to `path` and the CSV table next to it, with the
/// extension replaced by `csv`.
pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(report)?)?;
    std::fs::write(path.with_extension("csv"), to_csv(report)?)?;
    Ok(())
}
