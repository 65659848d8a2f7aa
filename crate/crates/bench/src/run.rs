//! The benchmark loop: predict, time, score and aggregate per method.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crackseg::metrics::{bpm_counts, confusion, scores, BpmConfig, EvalCounts};
use crackseg::mgm::{calibrate_global, segment_mgm, GlobalThreshold};
use crackseg::qi::{save_density, segment_qi_staged, HamiltonianConfig};
use crackseg::qseg::{segment_qseg_with, Endpoint, LocalAnnealer, Sampler, WeightOffset};
use crackseg::{io, load_manifest, normalize_contrast, BinaryMask, DatasetManifest, GrayPatch};

use crate::dataset::create_dir;
use crate::error::{BenchError, Result};
use crate::method::Method;
use crate::overlay::emit_overlay;
use crate::report::{emit_report, mean_std, MethodRow, ReportFormat};

pub const PER_PATCH_NAME: &str = "per_patch.json";

/// Where the MGM global threshold comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Calibration {
    /// Average over the scored patches themselves.
    ScoredSet,
    /// Average over the patches of another manifest.
    Manifest(PathBuf),
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SamplerChoice {
    Local,
    External(Endpoint),
}

impl SamplerChoice {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "local" {
            Ok(SamplerChoice::Local)
        } else {
            Endpoint::parse(s)
                .map(SamplerChoice::External)
                .map_err(|e| BenchError::Config(e.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub methods: Vec<Method>,
    pub hamiltonian: HamiltonianConfig,
    pub offset: WeightOffset,
    pub sweeps: usize,
    pub restarts: usize,
    pub sampler: SamplerChoice,
    pub bpm: BpmConfig,
    pub calibration: Calibration,
    pub out_dir: PathBuf,
    pub overlays: bool,
    /// Also write each QI density map as a 16-bit image.
    pub dump_density: bool,
    pub report_format: ReportFormat,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(
        manifest: impl Into<PathBuf>,
        methods: Vec<Method>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        let annealer = LocalAnnealer::new(0);
        Self {
            manifest: manifest.into(),
            methods,
            hamiltonian: HamiltonianConfig::default(),
            offset: WeightOffset::Mean,
            sweeps: annealer.sweeps,
            restarts: annealer.restarts,
            sampler: SamplerChoice::Local,
            bpm: BpmConfig::default(),
            calibration: Calibration::ScoredSet,
            out_dir: out_dir.into(),
            overlays: false,
            dump_density: false,
            report_format: ReportFormat::Csv,
            seed: 1,
        }
    }

    fn sampler(&self) -> Box<dyn Sampler> {
        match &self.sampler {
            SamplerChoice::Local => Box::new(LocalAnnealer {
                sweeps: self.sweeps,
                restarts: self.restarts,
                ..LocalAnnealer::new(self.seed)
            }),
            SamplerChoice::External(e) => Box::new(e.clone()),
        }
    }

    /// Report label; Q-Seg carries its sampler backend.
    pub fn label(&self, m: &Method) -> String {
        match m {
            Method::Qseg => format!("qseg-{}", self.sampler().name()),
            other => other.to_string(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(BenchError::Config("no methods selected".into()));
        }
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(BenchError::Config(
                "sweeps and restarts must be at least 1".into(),
            ));
        }
        self.hamiltonian
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))
    }
}

/// Scores of one method on one patch. Written to the per-patch sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchRecord {
    pub method: String,
    pub patch: String,
    pub plain: EvalCounts,
    pub bpm: EvalCounts,
    pub iou: f64,
    pub f1: f64,
    pub iou_bpm: f64,
    pub f1_bpm: f64,
    pub time_s: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<MethodRow>,
    pub records: Vec<PatchRecord>,
    pub report_path: PathBuf,
}

struct Item {
    name: String,
    patch: GrayPatch,
    degenerate: bool,
    truth: BinaryMask,
    external: std::collections::BTreeMap<String, PathBuf>,
}

pub fn run_benchmark(cfg: &RunConfig) -> Result<Vec<MethodRow>> {
    run_benchmark_detailed(cfg).map(|o| o.rows)
}

/// Runs every method over the manifest and writes masks, the per-patch
/// sidecar, the report and (optionally) overlays under `cfg.out_dir`.
///
/// Only the segmentation call is timed. External masks are read from disk
/// and report zero prediction time.
pub fn run_benchmark_detailed(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let manifest = load_manifest(&cfg.manifest)?;
    let items = load_items(&manifest)?;
    check_external_keys(cfg, &items)?;
    let threshold = if cfg.methods.contains(&Method::Mgm) {
        Some(calibrate(cfg, &items)?)
    } else {
        None
    };
    create_dir(&cfg.out_dir)?;

    let mut rows = Vec::new();
    let mut records = Vec::new();
    for method in &cfg.methods {
        let label = cfg.label(method);
        let dir_name = label.replace(':', "-");
        let mask_dir = cfg.out_dir.join("masks").join(&dir_name);
        create_dir(&mask_dir)?;
        let overlay_dir = cfg.out_dir.join("overlays").join(&dir_name);
        if cfg.overlays {
            create_dir(&overlay_dir)?;
        }
        let density_dir = cfg.out_dir.join("density");
        if cfg.dump_density && *method == Method::Qi {
            create_dir(&density_dir)?;
        }
        let sampler = cfg.sampler();

        let mut method_records = Vec::with_capacity(items.len());
        for item in &items {
            let (pred, time_s) = match method {
                Method::Mgm => {
                    let t = threshold.as_ref().expect("calibrated when mgm is selected");
                    timed(|| Ok(segment_mgm(&item.patch, t)))?
                }
                Method::Qi if item.degenerate => (
                    BinaryMask::empty(item.patch.width(), item.patch.height()),
                    0.0,
                ),
                Method::Qi => {
                    let (stages, secs) =
                        timed(|| Ok(segment_qi_staged(&item.patch, &cfg.hamiltonian)?))?;
                    if cfg.dump_density {
                        save_density(
                            &stages.density,
                            density_dir.join(format!("{}.pgm", item.name)),
                        )?;
                    }
                    (stages.mask, secs)
                }
                Method::Qseg => timed(|| {
                    Ok(segment_qseg_with(
                        &item.patch,
                        cfg.offset,
                        sampler.as_ref(),
                    )?)
                })?,
                Method::External(key) => {
                    let mask = io::load_mask(&item.external[key])?;
                    if mask.dims() != item.truth.dims() {
                        return Err(crackseg::Error::DimensionMismatch {
                            left: mask.dims(),
                            right: item.truth.dims(),
                        }
                        .into());
                    }
                    (mask, 0.0)
                }
            };
            io::save_mask(&pred, mask_dir.join(format!("{}.png", item.name)))?;
            if cfg.overlays {
                let bg = Some(&item.patch);
                emit_overlay(
                    &pred,
                    &item.truth,
                    None,
                    bg,
                    overlay_dir.join(format!("{}.png", item.name)),
                )?;
                emit_overlay(
                    &pred,
                    &item.truth,
                    Some(&cfg.bpm),
                    bg,
                    overlay_dir.join(format!("{}_bpm.png", item.name)),
                )?;
            }
            method_records.push(score(
                &label,
                &item.name,
                &pred,
                &item.truth,
                &cfg.bpm,
                time_s,
            )?);
        }
        rows.push(summarize(&label, &method_records));
        records.extend(method_records);
    }

    let sidecar = cfg.out_dir.join(PER_PATCH_NAME);
    let text =
        serde_json::to_string_pretty(&records).map_err(|e| BenchError::Report(e.to_string()))?;
    std::fs::write(&sidecar, text)
        .map_err(|e| BenchError::Report(format!("{}: {e}", sidecar.display())))?;
    let report_path = cfg
        .out_dir
        .join(format!("report.{}", cfg.report_format.extension()));
    emit_report(&rows, cfg.report_format, &report_path)?;
    Ok(RunOutput {
        rows,
        records,
        report_path,
    })
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64()))
}

fn load_items(manifest: &DatasetManifest) -> Result<Vec<Item>> {
    let mut names = BTreeSet::new();
    let mut items = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let truth_path = entry.truth.as_ref().ok_or_else(|| BenchError::Data {
            path: entry.patch.clone(),
            reason: "missing ground truth for a scored entry".into(),
        })?;
        let name = entry
            .patch
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if !names.insert(name.clone()) {
            return Err(BenchError::Data {
                path: entry.patch.clone(),
                reason: format!("duplicate patch name {name:?}"),
            });
        }
        let raw = io::load_patch(&entry.patch)?;
        let truth = io::load_mask(truth_path)?;
        let norm = normalize_contrast(&raw);
        let patch = if norm.degenerate { raw } else { norm.patch };
        items.push(Item {
            name,
            patch,
            degenerate: norm.degenerate,
            truth,
            external: entry.external.clone(),
        });
    }
    Ok(items)
}

fn check_external_keys(cfg: &RunConfig, items: &[Item]) -> Result<()> {
    for m in &cfg.methods {
        let Method::External(key) = m else { continue };
        let missing: Vec<&str> = items
            .iter()
            .filter(|i| !i.external.contains_key(key))
            .map(|i| i.name.as_str())
            .collect();
        if !items.is_empty() && missing.len() == items.len() {
            return Err(BenchError::Config(format!(
                "unknown external method key {key:?}"
            )));
        }
        if let Some(first) = missing.first() {
            return Err(BenchError::Data {
                path: cfg.manifest.clone(),
                reason: format!("entry {first} has no external mask {key:?}"),
            });
        }
    }
    Ok(())
}

fn calibrate(cfg: &RunConfig, items: &[Item]) -> Result<GlobalThreshold> {
    match &cfg.calibration {
        Calibration::Fixed(v) => {
            GlobalThreshold::fixed(*v).map_err(|e| BenchError::Config(e.to_string()))
        }
        Calibration::ScoredSet => {
            let patches: Vec<GrayPatch> = items.iter().map(|i| i.patch.clone()).collect();
            Ok(calibrate_global(&patches)?)
        }
        Calibration::Manifest(path) => {
            let m = load_manifest(path)?;
            let patches = m
                .entries
                .iter()
                .map(|e| io::load_patch(&e.patch).map(|p| normalize_contrast(&p)))
                .map(|r| r.map(|n| n.patch))
                .collect::<crackseg::Result<Vec<_>>>()?;
            Ok(calibrate_global(&patches)?)
        }
    }
}

fn score(
    method: &str,
    patch: &str,
    pred: &BinaryMask,
    truth: &BinaryMask,
    bpm: &BpmConfig,
    time_s: f64,
) -> Result<PatchRecord> {
    let plain = confusion(pred, truth)?;
    let lenient = bpm_counts(pred, truth, bpm)?;
    let (p, b) = (scores(&plain), scores(&lenient));
    Ok(PatchRecord {
        method: method.to_string(),
        patch: patch.to_string(),
        plain,
        bpm: lenient,
        iou: p.iou,
        f1: p.f1,
        iou_bpm: b.iou,
        f1_bpm: b.f1,
        time_s,
    })
}

/// Aggregates per-patch records into one report row.
pub fn summarize(method: &str, records: &[PatchRecord]) -> MethodRow {
    let stat = |f: fn(&PatchRecord) -> f64| mean_std(&records.iter().map(f).collect::<Vec<_>>());
    let (avg_iou, std_iou) = stat(|r| r.iou);
    let (avg_f1, std_f1) = stat(|r| r.f1);
    let (avg_iou_bpm, std_iou_bpm) = stat(|r| r.iou_bpm);
    let (avg_f1_bpm, std_f1_bpm) = stat(|r| r.f1_bpm);
    let (time_mean_s, time_std_s) = stat(|r| r.time_s);
    MethodRow {
        method: method.to_string(),
        avg_iou,
        std_iou,
        avg_f1,
        std_f1,
        avg_iou_bpm,
        std_iou_bpm,
        avg_f1_bpm,
        std_f1_bpm,
        time_mean_s,
        time_std_s,
    }
}

/// Reads a per-patch sidecar back.
pub fn load_records(out_dir: impl AsRef<Path>) -> Result<Vec<PatchRecord>> {
    let path = out_dir.as_ref().join(PER_PATCH_NAME);
    let text = std::fs::read_to_string(&path).map_err(|e| BenchError::Data {
        path: path.clone(),
        reason: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| BenchError::Data {
        path,
        reason: e.to_string(),
    })
}
