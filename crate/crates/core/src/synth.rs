//! Seeded synthetic crack patches for desk-scale testing.
//!
//! The background is a light textured surface (0.7 plus Gaussian noise) and
//! the crack is a dark biased random walk from one border to the opposite one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patch::{BinaryMask, GrayPatch};

pub const BACKGROUND_LEVEL: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    /// Side length in pixels.
    pub size: usize,
    /// Crack thickness in pixels, 1 to 3.
    pub crack_width: usize,
    /// Intensity drop of crack pixels relative to the local background.
    pub crack_depth: f64,
    pub noise_sigma: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            size: 32,
            crack_width: 1,
            crack_depth: 0.6,
            noise_sigma: 0.05,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.size < 8 {
            return Err(Error::InvalidConfig(format!(
                "synthetic patch size must be >= 8, got {}",
                self.size
            )));
        }
        if !(1..=3).contains(&self.crack_width) {
            return Err(Error::InvalidConfig(format!(
                "crack width must be in [1, 3], got {}",
                self.crack_width
            )));
        }
        if !(self.crack_depth > 0.0 && self.crack_depth <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "crack depth must be in (0, 1], got {}",
                self.crack_depth
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise sigma must be >= 0, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }
}

/// Generates a patch and its exact crack mask. Pure function of `cfg`.
pub fn synth_generate(cfg: &SynthConfig) -> Result<(GrayPatch, BinaryMask)> {
    cfg.validate()?;
    let n = cfg.size;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let noise =
        Normal::new(0.0, cfg.noise_sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let background: Vec<f64> = (0..n * n)
        .map(|_| (BACKGROUND_LEVEL + noise.sample(&mut rng)).clamp(0.0, 1.0))
        .collect();

    let vertical = rng.random_bool(0.5);
    let mut center = rng.random_range(n / 4..n - n / 4) as isize;
    let drift: i32 = rng.random_range(-1..=1);
    // Step probabilities for moving toward -1, 0, +1 across the walk axis.
    let (p_neg, p_zero) = match drift {
        -1 => (0.40, 0.45),
        1 => (0.15, 0.45),
        _ => (0.25, 0.50),
    };

    let lo = -((cfg.crack_width as isize - 1) / 2);
    let hi = cfg.crack_width as isize / 2;
    let mut mask = BinaryMask::empty(n, n);
    for along in 0..n {
        if along > 0 {
            let u: f64 = rng.random();
            let step = if u < p_neg {
                -1
            } else if u < p_neg + p_zero {
                0
            } else {
                1
            };
            center = (center + step).clamp(0, n as isize - 1);
        }
        for off in lo..=hi {
            let across = center + off;
            if across < 0 || across >= n as isize {
                continue;
            }
            let (x, y) = if vertical {
                (across as usize, along)
            } else {
                (along, across as usize)
            };
            mask.set(x, y, true);
        }
    }

    let data = background
        .iter()
        .zip(mask.data())
        .map(|(&b, &crack)| {
            if crack {
                (b - cfg.crack_depth).clamp(0.0, 1.0)
            } else {
                b
            }
        })
        .collect();
    Ok((GrayPatch::new(n, n, data)?, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn noise_free_levels() {
        let cfg = SynthConfig {
            seed: 1,
            size: 32,
            crack_width: 1,
            crack_depth: 0.6,
            noise_sigma: 0.0,
        };
        let (p, m) = synth_generate(&cfg).unwrap();
        for (&v, &c) in p.data().iter().zip(m.data()) {
            let want = if c { 0.1 } else { 0.7 };
            assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        }
        assert!(m.count() >= 32);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let cfg = SynthConfig::default();
        let (p1, m1) = synth_generate(&cfg).unwrap();
        let (p2, m2) = synth_generate(&cfg).unwrap();
        assert_eq!(m1, m2);
        let bits = |p: &GrayPatch| p.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&p1), bits(&p2));
    }

    #[test]
    fn rejects_small_size_and_bad_params() {
        let bad = [
            SynthConfig {
                size: 7,
                ..Default::default()
            },
            SynthConfig {
                crack_width: 0,
                ..Default::default()
            },
            SynthConfig {
                crack_width: 4,
                ..Default::default()
            },
            SynthConfig {
                crack_depth: 0.0,
                ..Default::default()
            },
            SynthConfig {
                noise_sigma: -0.1,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(synth_generate(&cfg).is_err(), "{cfg:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn crack_spans_patch(seed in any::<u64>(), width in 1usize..=3, size in 8usize..40) {
            let cfg = SynthConfig { seed, size, crack_width: width, ..Default::default() };
            let (p, m) = synth_generate(&cfg).unwrap();
            prop_assert!(m.count() >= size);
            prop_assert!(p.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
