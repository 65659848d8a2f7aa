//! Otsu thresholding and the mean-global-threshold ("MGM") baseline.
//!
//! Intensities are quantized to 256 bins (`round(v * 255)`). A candidate
//! threshold `k` puts bins `<= k` in the dark class, which is the crack class.

use crate::error::{Error, Result};
use crate::patch::{BinaryMask, GrayPatch};

pub const BINS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtsuResult {
    /// Bin edge `k / 255` of the winning threshold.
    pub threshold: f64,
    pub bin: u8,
    pub between_class_variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalThreshold {
    pub value: f64,
    pub calibration_size: usize,
}

impl GlobalThreshold {
    pub fn fixed(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidConfig(format!(
                "threshold {value} outside [0, 1]"
            )));
        }
        Ok(Self {
            value,
            calibration_size: 1,
        })
    }
}

#[inline]
pub fn quantize(v: f64) -> usize {
    (v.clamp(0.0, 1.0) * 255.0).round() as usize
}

pub fn histogram(values: &[f64]) -> [u64; BINS] {
    let mut hist = [0u64; BINS];
    for &v in values {
        hist[quantize(v)] += 1;
    }
    hist
}

/// Exhaustive Otsu scan over a 256-bin histogram.
///
/// Returns `None` when fewer than two bins are occupied.
pub fn otsu_from_histogram(hist: &[u64; BINS]) -> Option<OtsuResult> {
    let total: u64 = hist.iter().sum();
    if hist.iter().filter(|&&h| h > 0).count() < 2 {
        return None;
    }
    let total = total as f64;
    let level = |k: usize| k as f64 / 255.0;
    let sum_all: f64 = hist
        .iter()
        .enumerate()
        .map(|(k, &h)| level(k) * h as f64)
        .sum();

    let mut count0 = 0.0;
    let mut sum0 = 0.0;
    let mut best = (0usize, f64::NEG_INFINITY);
    for (k, &h) in hist.iter().enumerate() {
        count0 += h as f64;
        sum0 += level(k) * h as f64;
        let count1 = total - count0;
        let var = if count0 == 0.0 || count1 == 0.0 {
            0.0
        } else {
            let w0 = count0 / total;
            let w1 = count1 / total;
            let mu0 = sum0 / count0;
            let mu1 = (sum_all - sum0) / count1;
            w0 * w1 * (mu0 - mu1) * (mu0 - mu1)
        };
        if var > best.1 {
            best = (k, var);
        }
    }
    Some(OtsuResult {
        threshold: level(best.0),
        bin: best.0 as u8,
        between_class_variance: best.1.max(0.0),
    })
}

/// Otsu threshold of a patch. Single-intensity patches are rejected.
pub fn otsu_threshold(p: &GrayPatch) -> Result<OtsuResult> {
    otsu_from_histogram(&histogram(p.data())).ok_or(Error::NoContrast)
}

/// Averages per-patch Otsu thresholds, skipping patches without contrast.
pub fn calibrate_global(patches: &[GrayPatch]) -> Result<GlobalThreshold> {
    if patches.is_empty() {
        return Err(Error::InvalidConfig(
            "calibration needs at least one patch".into(),
        ));
    }
    // Averaged in bin units so equal thresholds reproduce their level exactly.
    let bins: Vec<u64> = patches
        .iter()
        .filter_map(|p| otsu_threshold(p).ok())
        .map(|r| r.bin as u64)
        .collect();
    if bins.is_empty() {
        return Err(Error::NoContrast);
    }
    Ok(GlobalThreshold {
        value: bins.iter().sum::<u64>() as f64 / bins.len() as f64 / 255.0,
        calibration_size: bins.len(),
    })
}

/// Dark pixels are crack: those whose quantized level `bin / 255` is `<= t`.
pub fn segment_mgm(p: &GrayPatch, t: &GlobalThreshold) -> BinaryMask {
    BinaryMask::new(
        p.width(),
        p.height(),
        p.data()
            .iter()
            .map(|&v| quantize(v) as f64 / 255.0 <= t.value)
            .collect(),
    )
    .expect("dimensions come from a valid patch")
}
