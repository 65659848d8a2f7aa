//! Confusion overlays: TP green, FP red, FN blue, everything else gray.

use std::path::Path;

use crackseg::metrics::{bpm_sets, BpmConfig};
use crackseg::{BinaryMask, GrayPatch};

use crate::error::Result;

pub const TP: [u8; 3] = [0, 255, 0];
pub const FP: [u8; 3] = [255, 0, 0];
pub const FN: [u8; 3] = [0, 0, 255];

/// Renders the overlay as packed RGB bytes.
///
/// Without `bpm` the classes are plain pixel comparisons. With `bpm` they are
/// the skeleton sets behind the BPM counts. Background pixels take the gray
/// level of `background` when given, black otherwise.
pub fn render_overlay(
    pred: &BinaryMask,
    truth: &BinaryMask,
    bpm: Option<&BpmConfig>,
    background: Option<&GrayPatch>,
) -> Result<Vec<u8>> {
    let (tp, fp, fn_) = match bpm {
        Some(cfg) => {
            let s = bpm_sets(pred, truth, cfg)?;
            (s.tp, s.fp, s.fn_)
        }
        None => {
            crackseg::metrics::confusion(pred, truth)?;
            let (w, h) = pred.dims();
            let both = |f: fn(bool, bool) -> bool| {
                BinaryMask::from_fn(w, h, |x, y| f(pred.get(x, y), truth.get(x, y)))
            };
            (
                both(|p, t| p && t),
                both(|p, t| p && !t),
                both(|p, t| !p && t),
            )
        }
    };
    if let Some(bg) = background {
        if bg.dims() != pred.dims() {
            return Err(crackseg::Error::DimensionMismatch {
                left: bg.dims(),
                right: pred.dims(),
            }
            .into());
        }
    }
    let gray = background.map(|b| b.to_u8());
    let mut rgb = Vec::with_capacity(pred.len() * 3);
    for i in 0..pred.len() {
        let px = if tp.data()[i] {
            TP
        } else if fp.data()[i] {
            FP
        } else if fn_.data()[i] {
            FN
        } else {
            let g = gray.as_ref().map_or(0, |g| g[i]);
            [g, g, g]
        };
        rgb.extend_from_slice(&px);
    }
    Ok(rgb)
}

pub fn emit_overlay(
    pred: &BinaryMask,
    truth: &BinaryMask,
    bpm: Option<&BpmConfig>,
    background: Option<&GrayPatch>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let rgb = render_overlay(pred, truth, bpm, background)?;
    crackseg::io::save_rgb(pred.width(), pred.height(), &rgb, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colors(rgb: &[u8]) -> Vec<[u8; 3]> {
        rgb.chunks(3).map(|c| [c[0], c[1], c[2]]).collect()
    }

    #[test]
    fn identical_masks_are_green_only() {
        let truth = BinaryMask::from_fn(6, 6, |x, _| x == 2);
        let px = colors(&render_overlay(&truth, &truth, None, None).unwrap());
        for (i, c) in px.iter().enumerate() {
            let expected = if truth.data()[i] { TP } else { [0, 0, 0] };
            assert_eq!(*c, expected);
        }
    }

    #[test]
    fn empty_prediction_is_blue_only() {
        let truth = BinaryMask::from_fn(6, 6, |x, _| x == 2);
        let bg = GrayPatch::new(6, 6, vec![0.5; 36]).unwrap();
        let px =
            colors(&render_overlay(&BinaryMask::empty(6, 6), &truth, None, Some(&bg)).unwrap());
        for (i, c) in px.iter().enumerate() {
            let expected = if truth.data()[i] { FN } else { [128, 128, 128] };
            assert_eq!(*c, expected);
        }
    }

    #[test]
    fn shifted_skeleton_has_no_errors_under_bpm() {
        let truth = BinaryMask::from_fn(16, 16, |x, y| x == 7 && (2..14).contains(&y));
        let pred = BinaryMask::from_fn(16, 16, |x, y| x == 8 && (2..14).contains(&y));
        let plain = colors(&render_overlay(&pred, &truth, None, None).unwrap());
        assert!(plain.contains(&FP) && plain.contains(&FN));
        let cfg = BpmConfig { radius: 2 };
        let px = colors(&render_overlay(&pred, &truth, Some(&cfg), None).unwrap());
        assert!(!px.contains(&FP) && !px.contains(&FN));
        assert_eq!(px.iter().filter(|&&c| c == TP).count(), 12);
    }

    #[test]
    fn mismatched_dims_are_rejected() {
        let a = BinaryMask::empty(3, 3);
        let b = BinaryMask::empty(3, 4);
        assert!(render_overlay(&a, &b, None, None).is_err());
        let bg = GrayPatch::new(2, 2, vec![0.0; 4]).unwrap();
        assert!(render_overlay(&a, &a, None, Some(&bg)).is_err());
    }

    #[test]
    fn writes_png() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("o.png");
        let m = BinaryMask::from_fn(4, 4, |x, y| x == y);
        emit_overlay(&m, &m, None, None, &path).unwrap();
        let img = image::open(&path).unwrap().into_rgb8();
        assert_eq!(img.get_pixel(1, 1).0, TP);
        assert_eq!(img.get_pixel(0, 1).0, [0, 0, 0]);
    }
}
