//! Metrics-only scoring of two mask directories, paired by file stem.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crackseg::io;
use crackseg::metrics::{bpm_counts, confusion, scores, BpmConfig, EvalCounts};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub name: String,
    pub plain: EvalCounts,
    pub bpm: EvalCounts,
    pub iou: f64,
    pub f1: f64,
    pub iou_bpm: f64,
    pub f1_bpm: f64,
}

fn mask_files(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let data_err = |reason: String| BenchError::Data {
        path: dir.to_path_buf(),
        reason,
    };
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| data_err(e.to_string()))? {
        let path = entry.map_err(|e| data_err(e.to_string()))?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        if !matches!(ext.as_deref(), Some("png" | "pgm")) {
            continue;
        }
        let stem = path
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        if let Some(prev) = out.insert(stem.clone(), path.clone()) {
            return Err(data_err(format!(
                "{} and {} share the name {stem:?}",
                prev.display(),
                path.display()
            )));
        }
    }
    Ok(out)
}

/// Scores every truth mask against the prediction with the same stem.
pub fn evaluate_dirs(
    pred_dir: &Path,
    truth_dir: &Path,
    bpm: &BpmConfig,
) -> Result<Vec<EvalRecord>> {
    let preds = mask_files(pred_dir)?;
    let truths = mask_files(truth_dir)?;
    if truths.is_empty() {
        return Err(BenchError::Data {
            path: truth_dir.to_path_buf(),
            reason: "no masks found".into(),
        });
    }
    let mut out = Vec::with_capacity(truths.len());
    for (name, truth_path) in &truths {
        let pred_path = preds.get(name).ok_or_else(|| BenchError::Data {
            path: pred_dir.to_path_buf(),
            reason: format!("no prediction for {name:?}"),
        })?;
        let pred = io::load_mask(pred_path)?;
        let truth = io::load_mask(truth_path)?;
        let plain = confusion(&pred, &truth)?;
        let lenient = bpm_counts(&pred, &truth, bpm)?;
        let (p, b) = (scores(&plain), scores(&lenient));
        out.push(EvalRecord {
            name: name.clone(),
            plain,
            bpm: lenient,
            iou: p.iou,
            f1: p.f1,
            iou_bpm: b.iou,
            f1_bpm: b.f1,
        });
    }
    Ok(out)
}
