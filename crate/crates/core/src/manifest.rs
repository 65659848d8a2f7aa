//! Dataset manifests: JSON lists of patches, ground-truth masks and
//! externally produced prediction masks.
//!
//! ```json
//! {"root": "data", "entries": [
//!   {"patch": "p0.pgm", "truth": "m0.pgm", "external": {"unet": "unet/p0.png"}}
//! ]}
//! ```
//!
//! A relative `root` is resolved against the manifest's own directory, and
//! every entry path is resolved against `root`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub patch: PathBuf,
    #[serde(default)]
    pub truth: Option<PathBuf>,
    #[serde(default)]
    pub external: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Writes the manifest as pretty JSON without resolving paths.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))?;
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Parses, resolves and validates a manifest.
///
/// Every referenced file must exist, and each ground-truth or external mask
/// must match its patch's dimensions.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path.to_path_buf())
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;
    let raw: DatasetManifest =
        serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let root = if raw.root.is_absolute() {
        raw.root.clone()
    } else {
        base.join(&raw.root)
    };

    let mut entries = Vec::with_capacity(raw.entries.len());
    for entry in raw.entries {
        let patch = root.join(&entry.patch);
        let truth = entry.truth.map(|t| root.join(t));
        let external: BTreeMap<_, _> = entry
            .external
            .into_iter()
            .map(|(k, v)| (k, root.join(v)))
            .collect();

        for p in std::iter::once(&patch)
            .chain(truth.iter())
            .chain(external.values())
        {
            if !p.is_file() {
                return Err(Error::MissingFile(p.clone()));
            }
        }

        let dims = io::load_patch(&patch)?.dims();
        for m in truth.iter().chain(external.values()) {
            let mdims = io::load_mask(m)?.dims();
            if mdims != dims {
                return Err(Error::DimensionMismatch {
                    left: dims,
                    right: mdims,
                });
            }
        }
        entries.push(ManifestEntry {
            patch,
            truth,
            external,
        });
    }
    Ok(DatasetManifest { root, entries })
}
