//! Per-method summary rows and their CSV, Markdown and JSON renderings.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const COLUMNS: [&str; 11] = [
    "method",
    "avg_iou",
    "std_iou",
    "avg_f1",
    "std_f1",
    "avg_iou_bpm",
    "std_iou_bpm",
    "avg_f1_bpm",
    "std_f1_bpm",
    "time_mean_s",
    "time_std_s",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub method: String,
    pub avg_iou: f64,
    pub std_iou: f64,
    pub avg_f1: f64,
    pub std_f1: f64,
    pub avg_iou_bpm: f64,
    pub std_iou_bpm: f64,
    pub avg_f1_bpm: f64,
    pub std_f1_bpm: f64,
    pub time_mean_s: f64,
    pub time_std_s: f64,
}

/// Mean and population standard deviation.
///
/// Values are summed in sorted order so the result does not depend on the
/// order of the input.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let mut dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    dev.sort_by(f64::total_cmp);
    (mean, (dev.iter().sum::<f64>() / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "json" => Ok(ReportFormat::Json),
            other => Err(BenchError::Config(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

pub fn emit_report(rows: &[MethodRow], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Csv => to_csv(rows)?,
        ReportFormat::Markdown => to_markdown(rows),
        ReportFormat::Json => {
            serde_json::to_string_pretty(rows).map_err(|e| BenchError::Report(e.to_string()))?
        }
    };
    std::fs::write(path, text).map_err(|e| BenchError::Report(format!("{}: {e}", path.display())))
}

fn to_csv(rows: &[MethodRow]) -> Result<String> {
    let err = |e: csv::Error| BenchError::Report(e.to_string());
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(COLUMNS).map_err(err)?;
    for row in rows {
        w.serialize(row).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| BenchError::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| BenchError::Report(e.to_string()))
}

pub fn to_markdown(rows: &[MethodRow]) -> String {
    let mut out = String::from(
        "| method | avg_iou ± std_iou | avg_f1 ± std_f1 | avg_iou_bpm ± std_iou_bpm \
         | avg_f1_bpm ± std_f1_bpm | time_mean_s ± time_std_s |\n\
         |---|---|---|---|---|---|\n",
    );
    for r in rows {
        out.push_str(&format!(
            "| {} | {:.3} ± {:.3} | {:.3} ± {:.3} | {:.3} ± {:.3} | {:.3} ± {:.3} | {:.4} ± {:.4} |\n",
            r.method,
            r.avg_iou,
            r.std_iou,
            r.avg_f1,
            r.std_f1,
            r.avg_iou_bpm,
            r.std_iou_bpm,
            r.avg_f1_bpm,
            r.std_f1_bpm,
            r.time_mean_s,
            r.time_std_s,
        ));
    }
    out
}

pub fn load_report_csv(path: impl AsRef<Path>) -> Result<Vec<MethodRow>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| BenchError::Report(format!("{}: {e}", path.display())))?;
    let headers = r.headers().map_err(|e| BenchError::Report(e.to_string()))?;
    if headers.iter().ne(COLUMNS) {
        return Err(BenchError::Report(format!(
            "unexpected columns in {}",
            path.display()
        )));
    }
    r.deserialize()
        .collect::<std::result::Result<Vec<MethodRow>, _>>()
        .map_err(|e| BenchError::Report(e.to_string()))
}
