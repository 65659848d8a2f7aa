use std::path::{Path, PathBuf};

use crackseg::{io, synth_generate, DatasetManifest, ManifestEntry, SynthConfig};

use crate::error::{BenchError, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

/// Writes `count` synthetic patches and masks under `dir` plus a manifest.
///
/// Patch `i` uses seed `seed + i` and crack width `1 + i % 3`; the other
/// generator settings come from `base`. Returns the manifest path.
pub fn write_synthetic_dataset(
    dir: impl AsRef<Path>,
    count: usize,
    seed: u64,
    base: &SynthConfig,
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    if count == 0 {
        return Err(BenchError::Config("count must be at least 1".into()));
    }
    for sub in ["patches", "masks"] {
        create_dir(&dir.join(sub))?;
    }
    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        let cfg = SynthConfig {
            seed: seed.wrapping_add(i as u64),
            crack_width: 1 + i % 3,
            ..*base
        };
        let (patch, mask) = synth_generate(&cfg)?;
        let name = format!("synth_{i:03}.pgm");
        let patch_rel = PathBuf::from("patches").join(&name);
        let mask_rel = PathBuf::from("masks").join(&name);
        io::save_patch(&patch, dir.join(&patch_rel))?;
        io::save_mask(&mask, dir.join(&mask_rel))?;
        entries.push(ManifestEntry {
            patch: patch_rel,
            truth: Some(mask_rel),
            external: Default::default(),
        });
    }
    let manifest = DatasetManifest {
        root: PathBuf::from("."),
        entries,
    };
    let path = dir.join(MANIFEST_NAME);
    manifest.save(&path)?;
    Ok(path)
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| BenchError::Data {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}
