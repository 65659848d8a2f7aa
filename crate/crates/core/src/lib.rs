//! Label-free crack segmentation for small grayscale patches.
//!
//! Three segmenters share one input type ([`GrayPatch`]) and one output type
//! ([`BinaryMask`]):
//!
//! - [`mgm`]: Otsu thresholds averaged into one global threshold.
//! - [`qi`]: a lattice Hamiltonian whose negative-energy eigenstates
//!   concentrate in cracks.
//! - [`qseg`]: max-cut over the pixel graph, solved as a QUBO by simulated
//!   annealing or an external sampler.
//!
//! [`metrics`] scores masks with pixel F1/IoU and the skeleton-based
//! boundary proximity metric.

pub mod error;
pub mod io;
pub mod manifest;
pub mod metrics;
pub mod mgm;
pub mod patch;
pub mod qi;
pub mod qseg;
pub mod synth;

pub use error::{Error, Result};
pub use manifest::{load_manifest, DatasetManifest, ManifestEntry};
pub use patch::{normalize_contrast, BinaryMask, GrayPatch, Normalized};
pub use synth::{synth_generate, SynthConfig};
