//! Boundary proximity metric: confusion counts recomputed on skeletons with
//! an `r`-pixel tolerance band.
//!
//! With `P = S(pred)`, `G = S(truth)` and `⊕` the disk dilation:
//! TP = |P ∩ (G ⊕ B_r)|, FP = |P \ (G ⊕ B_r)|, FN = |G \ (P ⊕ B_r)|, and
//! TN is the rest of the image.

use super::skeleton::skeletonize;
use super::EvalCounts;
use crate::error::Result;
use crate::patch::BinaryMask;

pub const DEFAULT_BPM_RADIUS: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BpmConfig {
    pub radius: u32,
}

impl Default for BpmConfig {
    fn default() -> Self {
        Self {
            radius: DEFAULT_BPM_RADIUS,
        }
    }
}

/// Offsets `(dx, dy)` with `dx² + dy² <= r²`.
pub fn disk_offsets(r: u32) -> Vec<(isize, isize)> {
    let r = r as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Dilation by a flat Euclidean disk of radius `r`.
pub fn dilate_disk(m: &BinaryMask, r: u32) -> BinaryMask {
    if r == 0 {
        return m.clone();
    }
    let offsets = disk_offsets(r);
    let (w, h) = (m.width() as isize, m.height() as isize);
    let mut out = BinaryMask::empty(m.width(), m.height());
    for y in 0..h {
        for x in 0..w {
            if !m.get(x as usize, y as usize) {
                continue;
            }
            for &(dx, dy) in &offsets {
                let (nx, ny) = (x + dx, y + dy);
                if nx >= 0 && ny >= 0 && nx < w && ny < h {
                    out.set(nx as usize, ny as usize, true);
                }
            }
        }
    }
    out
}

/// Pixel sets behind the BPM counts.
#[derive(Debug, Clone, PartialEq)]
pub struct BpmSets {
    pub tp: BinaryMask,
    pub fp: BinaryMask,
    pub fn_: BinaryMask,
}

impl BpmSets {
    pub fn counts(&self) -> EvalCounts {
        let tp = self.tp.count() as u64;
        let fp = self.fp.count() as u64;
        let fn_ = self.fn_.count() as u64;
        EvalCounts {
            tp,
            fp,
            fn_,
            tn: self.tp.len() as u64 - tp - fp - fn_,
        }
    }
}

pub fn bpm_sets(pred: &BinaryMask, truth: &BinaryMask, cfg: &BpmConfig) -> Result<BpmSets> {
    pred.ensure_same_dims(truth)?;
    let p = skeletonize(pred);
    let g = skeletonize(truth);
    let p_band = dilate_disk(&p, cfg.radius);
    let g_band = dilate_disk(&g, cfg.radius);
    let (w, h) = pred.dims();
    let zip3 = |a: &BinaryMask, b: &BinaryMask, f: fn(bool, bool) -> bool| {
        BinaryMask::new(
            w,
            h,
            a.data()
                .iter()
                .zip(b.data())
                .map(|(&x, &y)| f(x, y))
                .collect(),
        )
        .expect("same dims")
    };
    Ok(BpmSets {
        tp: zip3(&p, &g_band, |p, band| p && band),
        fp: zip3(&p, &g_band, |p, band| p && !band),
        fn_: zip3(&g, &p_band, |g, band| g && !band),
    })
}

pub fn bpm_counts(pred: &BinaryMask, truth: &BinaryMask, cfg: &BpmConfig) -> Result<EvalCounts> {
    bpm_sets(pred, truth, cfg).map(|s| s.counts())
}
