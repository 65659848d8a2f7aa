//! Pixel confusion metrics and the boundary proximity metric (BPM).

mod bpm;
mod skeleton;

pub use bpm::{
    bpm_counts, bpm_sets, dilate_disk, disk_offsets, BpmConfig, BpmSets, DEFAULT_BPM_RADIUS,
};
pub use skeleton::skeletonize;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::patch::BinaryMask;

/// Confusion counts with crack as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EvalCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl EvalCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub f1: f64,
    pub iou: f64,
}

pub fn confusion(pred: &BinaryMask, truth: &BinaryMask) -> Result<EvalCounts> {
    pred.ensure_same_dims(truth)?;
    let mut c = EvalCounts::default();
    for (&p, &t) in pred.data().iter().zip(truth.data()) {
        match (p, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Precision of the counts; `0` when nothing was predicted.
pub fn precision(c: &EvalCounts) -> f64 {
    if c.tp + c.fp == 0 {
        0.0
    } else {
        c.tp as f64 / (c.tp + c.fp) as f64
    }
}

/// Recall of the counts; `0` when there is no positive ground truth.
pub fn recall(c: &EvalCounts) -> f64 {
    if c.tp + c.fn_ == 0 {
        0.0
    } else {
        c.tp as f64 / (c.tp + c.fn_) as f64
    }
}

/// F1 and IoU. An empty prediction against an empty truth scores 1.
///
/// F1 is evaluated as `2TP / (2TP + FP + FN)`, which equals the harmonic
/// mean of precision and recall whenever `TP > 0` and is 0 otherwise.
pub fn scores(c: &EvalCounts) -> ScorePair {
    let errors = c.fp + c.fn_;
    if c.tp + errors == 0 {
        return ScorePair { f1: 1.0, iou: 1.0 };
    }
    let tp = c.tp as f64;
    ScorePair {
        f1: 2.0 * tp / (2.0 * tp + errors as f64),
        iou: tp / (tp + errors as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask(bits: &[u8]) -> BinaryMask {
        BinaryMask::new(bits.len(), 1, bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    #[test]
    fn identical_masks() {
        let m = mask(&[1, 0, 1, 1, 0]);
        assert_eq!(
            confusion(&m, &m).unwrap(),
            EvalCounts {
                tp: 3,
                fp: 0,
                fn_: 0,
                tn: 2
            }
        );
    }

    #[test]
    fn empty_prediction() {
        let c = confusion(&mask(&[0, 0, 0]), &mask(&[1, 0, 1])).unwrap();
        assert_eq!(
            c,
            EvalCounts {
                tp: 0,
                fp: 0,
                fn_: 2,
                tn: 1
            }
        );
    }

    #[test]
    fn direct_count() {
        let c = confusion(&mask(&[1, 1, 1, 0]), &mask(&[1, 1, 0, 1])).unwrap();
        assert_eq!(
            c,
            EvalCounts {
                tp: 2,
                fp: 1,
                fn_: 1,
                tn: 0
            }
        );
    }

    #[test]
    fn dimension_mismatch() {
        assert!(confusion(&mask(&[1, 0]), &mask(&[1, 0, 0])).is_err());
    }

    #[test]
    fn score_examples() {
        let s = scores(&EvalCounts {
            tp: 2,
            fp: 1,
            fn_: 1,
            tn: 0,
        });
        assert_eq!(s.iou, 0.5);
        assert!((s.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            scores(&EvalCounts::default()),
            ScorePair { f1: 1.0, iou: 1.0 }
        );
        assert_eq!(
            scores(&EvalCounts {
                tp: 0,
                fp: 3,
                fn_: 0,
                tn: 5
            }),
            ScorePair { f1: 0.0, iou: 0.0 }
        );
    }

    proptest! {
        #[test]
        fn f1_matches_precision_recall_form(tp in 1u64..10_000, fp in 0u64..10_000, fn_ in 0u64..10_000) {
            let c = EvalCounts { tp, fp, fn_, tn: 0 };
            let (p, r) = (precision(&c), recall(&c));
            let s = scores(&c);
            prop_assert!((s.f1 - 2.0 * p * r / (p + r)).abs() <= 1e-12);
        }

        #[test]
        fn role_swap_swaps_errors(bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..64)) {
            let (a, b): (Vec<bool>, Vec<bool>) = bits.into_iter().unzip();
            let a = BinaryMask::new(a.len(), 1, a).unwrap();
            let b = BinaryMask::new(b.len(), 1, b).unwrap();
            let ab = confusion(&a, &b).unwrap();
            let ba = confusion(&b, &a).unwrap();
            prop_assert_eq!(ab.tp, ba.tp);
            prop_assert_eq!(ab.tn, ba.tn);
            prop_assert_eq!(ab.fp, ba.fn_);
            prop_assert_eq!(ab.fn_, ba.fp);
            prop_assert_eq!(ab.total(), a.len() as u64);
        }
    }
}
