//! Localization-based segmentation.
//!
//! A patch is embedded as a 2D tight-binding Hamiltonian: pixel values sit on
//! the diagonal and nearest-neighbour sites are coupled by a Gaussian kernel
//! of their intensity difference. Strong intensity steps (crack edges)
//! decouple regions, so low-energy eigenstates localize inside cracks. The
//! crack map is the per-site weight of all eigenstates with negative energy.

pub mod eigen;

use std::path::Path;

pub use eigen::{symmetric_eigen, EigenSystem};

use crate::error::{Error, Result};
use crate::io;
use crate::mgm;
use crate::patch::{BinaryMask, GrayPatch};

pub const DEFAULT_SIGMA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binarize {
    /// Otsu scan on the min-max rescaled density; the high class is crack.
    Otsu,
    /// `density >= t`.
    Fixed(f64),
}

/// How eigenvector components are accumulated into the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityKind {
    /// `Σ v²`, a probability density bounded by 1.
    #[default]
    Squared,
    /// `Σ |v|`.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianConfig {
    pub sigma: f64,
    pub binarize: Binarize,
    pub density: DensityKind,
}

impl Default for HamiltonianConfig {
    fn default() -> Self {
        Self {
            sigma: DEFAULT_SIGMA,
            binarize: Binarize::Otsu,
            density: DensityKind::Squared,
        }
    }
}

impl HamiltonianConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "sigma must be > 0, got {}",
                self.sigma
            )));
        }
        if let Binarize::Fixed(t) = self.binarize {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidConfig(format!(
                    "fixed density threshold {t} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Gaussian coupling between two intensities.
pub fn gaussian_kernel(a: f64, b: f64, sigma: f64) -> f64 {
    (-(a - b) * (a - b) / (2.0 * sigma * sigma)).exp()
}

/// 4-neighbour lattice pairs `(l, l')` with `l < l'` for a row-major
/// `width × height` grid: horizontal pairs first, then vertical.
pub fn lattice_pairs(width: usize, height: usize) -> impl Iterator<Item = (usize, usize)> {
    let horizontal = (0..height).flat_map(move |y| {
        (0..width.saturating_sub(1)).map(move |x| (y * width + x, y * width + x + 1))
    });
    let vertical = (0..height.saturating_sub(1))
        .flat_map(move |y| (0..width).map(move |x| (y * width + x, (y + 1) * width + x)));
    horizontal.chain(vertical)
}

/// Sparse symmetric lattice Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeHamiltonian {
    width: usize,
    height: usize,
    diagonal: Vec<f64>,
    /// Upper-triangle couplings `(i, j, value)` with `i < j`.
    couplings: Vec<(usize, usize, f64)>,
}

impl LatticeHamiltonian {
    /// Assembles the matrix for any patch, including constant ones.
    pub fn from_patch(p: &GrayPatch, sigma: f64) -> Self {
        let a = p.data();
        let couplings = lattice_pairs(p.width(), p.height())
            .map(|(i, j)| (i, j, gaussian_kernel(a[i], a[j], sigma)))
            .collect();
        Self {
            width: p.width(),
            height: p.height(),
            diagonal: a.to_vec(),
            couplings,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.diagonal.len()
    }

    /// `(rows, cols)` of the lattice.
    pub fn lattice_dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.couplings
    }

    /// All stored nonzeros as `(row, col, value)`, both triangles.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.diagonal
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, v))
            .chain(
                self.couplings
                    .iter()
                    .flat_map(|&(i, j, v)| [(i, j, v), (j, i, v)]),
            )
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n_sites();
        let mut a = vec![0.0; n * n];
        for (i, j, v) in self.entries() {
            a[i * n + j] = v;
        }
        a
    }

    pub fn inf_norm(&self) -> f64 {
        let mut rows: Vec<f64> = self.diagonal.iter().map(|v| v.abs()).collect();
        for &(i, j, v) in &self.couplings {
            rows[i] += v.abs();
            rows[j] += v.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

/// Builds the Hamiltonian of a contrast-carrying patch.
pub fn build_hamiltonian(p: &GrayPatch, cfg: &HamiltonianConfig) -> Result<LatticeHamiltonian> {
    cfg.validate()?;
    if p.is_constant() {
        return Err(Error::NoContrast);
    }
    Ok(LatticeHamiltonian::from_patch(p, cfg.sigma))
}

pub fn eigendecompose_symmetric(h: &LatticeHamiltonian) -> Result<EigenSystem> {
    symmetric_eigen(&h.to_dense(), h.n_sites())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

/// Accumulates the states accepted by `select(k, λ_k)` into a site density.
pub fn density_from_states(
    es: &EigenSystem,
    width: usize,
    height: usize,
    kind: DensityKind,
    mut select: impl FnMut(usize, f64) -> bool,
) -> DensityMap {
    assert_eq!(es.dim(), width * height, "eigensystem size must match dims");
    let mut data = vec![0.0; es.dim()];
    for (k, (lambda, v)) in es.eigenvectors().enumerate() {
        if !select(k, lambda) {
            continue;
        }
        match kind {
            DensityKind::Squared => data.iter_mut().zip(v).for_each(|(d, x)| *d += x * x),
            DensityKind::Absolute => data.iter_mut().zip(v).for_each(|(d, x)| *d += x.abs()),
        }
    }
    DensityMap {
        width,
        height,
        data,
    }
}

/// `Σ_{λ_k < 0} v_k(site)²` reshaped to the lattice.
pub fn localization_density(es: &EigenSystem, width: usize, height: usize) -> DensityMap {
    density_from_states(es, width, height, DensityKind::Squared, |_, l| l < 0.0)
}

/// Thresholds a density map. A constant map yields an all-false mask.
pub fn binarize_density(d: &DensityMap, cfg: &HamiltonianConfig) -> BinaryMask {
    let data = match cfg.binarize {
        Binarize::Fixed(t) => d.data.iter().map(|&v| v >= t).collect(),
        Binarize::Otsu => {
            let (lo, hi) = d
                .data
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                });
            if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return BinaryMask::empty(d.width, d.height);
            }
            let scaled: Vec<f64> = d.data.iter().map(|&v| (v - lo) / (hi - lo)).collect();
            match mgm::otsu_from_histogram(&mgm::histogram(&scaled)) {
                Some(r) => scaled
                    .iter()
                    .map(|&v| mgm::quantize(v) > r.bin as usize)
                    .collect(),
                None => return BinaryMask::empty(d.width, d.height),
            }
        }
    };
    BinaryMask::new(d.width, d.height, data).expect("density dims are consistent")
}

/// Writes the density map as a 16-bit grayscale image for inspection.
pub fn save_density(d: &DensityMap, path: impl AsRef<Path>) -> Result<()> {
    io::save_gray16(d.width, d.height, &d.data, path)
}

/// Intermediate products of [`segment_qi`], for inspection and debugging.
#[derive(Debug, Clone)]
pub struct QiStages {
    pub hamiltonian: LatticeHamiltonian,
    pub eigen: EigenSystem,
    pub density: DensityMap,
    pub mask: BinaryMask,
}

pub fn segment_qi_staged(p: &GrayPatch, cfg: &HamiltonianConfig) -> Result<QiStages> {
    let hamiltonian = build_hamiltonian(p, cfg)?;
    let eigen = eigendecompose_symmetric(&hamiltonian)?;
    let density = density_from_states(&eigen, p.width(), p.height(), cfg.density, |_, l| l < 0.0);
    let mask = binarize_density(&density, cfg);
    Ok(QiStages {
        hamiltonian,
        eigen,
        density,
        mask,
    })
}

pub fn segment_qi(p: &GrayPatch, cfg: &HamiltonianConfig) -> Result<BinaryMask> {
    segment_qi_staged(p, cfg).map(|s| s.mask)
}
