//! PGM (binary P5) and PNG reading and writing for patches and masks.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ColorType, DynamicImage, ExtendedColorType, ImageEncoder, ImageReader};

use crate::error::{Error, Result};
use crate::patch::{BinaryMask, GrayPatch};

fn read_gray8(path: &Path) -> Result<(usize, usize, Vec<u8>)> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let unreadable = |reason: String| Error::Unreadable {
        path: path.to_path_buf(),
        reason,
    };
    let reader = ImageReader::open(path)
        .map_err(|e| unreadable(e.to_string()))?
        .with_guessed_format()
        .map_err(|e| unreadable(e.to_string()))?;
    let img = reader.decode().map_err(|e| unreadable(e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::ZeroSize {
            path: path.to_path_buf(),
        });
    }
    match img {
        DynamicImage::ImageLuma8(buf) => Ok((w, h, buf.into_raw())),
        other => Err(Error::MultiChannel {
            path: path.to_path_buf(),
            found: format!("{:?}", other.color()),
        }),
    }
}

/// Loads an 8-bit single-channel PGM or PNG, mapping `[0, 255]` to `[0, 1]`.
pub fn load_patch(path: impl AsRef<Path>) -> Result<GrayPatch> {
    let (w, h, bytes) = read_gray8(path.as_ref())?;
    GrayPatch::from_u8(w, h, &bytes)
}

/// Writes the patch as 8-bit grayscale, rounding to the nearest level.
pub fn save_patch(p: &GrayPatch, path: impl AsRef<Path>) -> Result<()> {
    write_gray(
        path.as_ref(),
        p.width(),
        p.height(),
        &p.to_u8(),
        ExtendedColorType::L8,
    )
}

/// Loads a mask where crack = 255 and background = 0. Any other value is rejected.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let path = path.as_ref();
    let (w, h, bytes) = read_gray8(path)?;
    let mut data = Vec::with_capacity(bytes.len());
    for b in bytes {
        match b {
            0 => data.push(false),
            255 => data.push(true),
            value => {
                return Err(Error::NonBinary {
                    path: path.to_path_buf(),
                    value,
                })
            }
        }
    }
    BinaryMask::new(w, h, data)
}

pub fn save_mask(m: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    write_gray(
        path.as_ref(),
        m.width(),
        m.height(),
        &m.to_u8(),
        ExtendedColorType::L8,
    )
}

/// Writes values in `[0, 1]` as a 16-bit grayscale image scaled by 65535.
///
/// `.pgm` output is a binary P5 file with maxval 65535 (big-endian samples).
pub fn save_gray16(
    width: usize,
    height: usize,
    values: &[f64],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let levels = values
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 65535.0).round() as u16);
    if is_pnm(path) {
        let mut out = format!("P5\n{width} {height}\n65535\n").into_bytes();
        levels.for_each(|q| out.extend_from_slice(&q.to_be_bytes()));
        return std::fs::write(path, out).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        });
    }
    let bytes: Vec<u8> = levels.flat_map(|q| q.to_ne_bytes()).collect();
    write_gray(path, width, height, &bytes, ExtendedColorType::L16)
}

/// Writes an 8-bit RGB image (PNG or binary PPM by extension).
pub fn save_rgb(width: usize, height: usize, rgb: &[u8], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = create(path)?;
    let res = if is_pnm(path) {
        PnmEncoder::new(BufWriter::new(file))
            .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
            .write_image(rgb, width as u32, height as u32, ExtendedColorType::Rgb8)
    } else {
        PngEncoder::new(BufWriter::new(file)).write_image(
            rgb,
            width as u32,
            height as u32,
            ExtendedColorType::Rgb8,
        )
    };
    res.map_err(|e| Error::Encode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn is_pnm(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("pgm" | "pnm" | "ppm")
    )
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_gray(
    path: &Path,
    width: usize,
    height: usize,
    bytes: &[u8],
    color: ExtendedColorType,
) -> Result<()> {
    debug_assert!(matches!(
        ColorType::try_from(color).ok(),
        Some(ColorType::L8 | ColorType::L16)
    ));
    let file = create(path)?;
    let res = if is_pnm(path) {
        PnmEncoder::new(BufWriter::new(file))
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(bytes, width as u32, height as u32, color)
    } else {
        PngEncoder::new(BufWriter::new(file)).write_image(bytes, width as u32, height as u32, color)
    };
    res.map_err(|e| Error::Encode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}
