//! Raster loading, grayscale conversion, box downsampling and gray-level
//! quantization.

use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gray-level counts accepted by [`quantize`].
pub const ALLOWED_LEVELS: [usize; 4] = [4, 16, 64, 256];

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let buf = image::ImageBuffer::<image::Luma<u8>, _>::from_raw(
            self.width as u32,
            self.height as u32,
            self.data.clone(),
        )
        .expect("buffer length matches dimensions");
        buf.save_with_format(path, ImageFormat::Png)
            .map_err(|e| match e {
                image::ImageError::IoError(io) => Error::io(path, io),
                other => Error::Decode {
                    path: path.to_path_buf(),
                    message: other.to_string(),
                },
            })
    }
}

/// Raster of gray-level indices in `[0, levels)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantizedImage {
    width: usize,
    height: usize,
    levels: usize,
    data: Vec<u8>,
}

impl QuantizedImage {
    pub fn new(width: usize, height: usize, levels: usize, data: Vec<u8>) -> Result<Self> {
        check_levels(levels)?;
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&v| usize::from(v) >= levels) {
            return Err(Error::InvalidArgument(format!(
                "level index {bad} out of range for {levels} levels"
            )));
        }
        Ok(Self {
            width,
            height,
            levels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        usize::from(self.data[row * self.width + col])
    }
}

fn check_levels(levels: usize) -> Result<()> {
    if ALLOWED_LEVELS.contains(&levels) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "gray levels must be one of {ALLOWED_LEVELS:?}, got {levels}"
        )))
    }
}

/// ITU-R 601 luma with integer arithmetic so that x.5 rounds up exactly.
#[inline]
fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b);
    ((weighted + 500) / 1000) as u8
}

/// Loads an 8-bit grayscale or RGB image stored as PNG or binary PGM.
/// Alpha channels are ignored.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map_err(|e| Error::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        other => {
            return Err(Error::UnsupportedImage {
                path: path.to_path_buf(),
                message: format!("format {other:?} is not PNG or PGM"),
            })
        }
    }
    let decoded = reader.decode().map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let data = match decoded {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageLumaA8(buf) => buf.pixels().map(|p| p.0[0]).collect(),
        DynamicImage::ImageRgb8(buf) => buf
            .pixels()
            .map(|p| luminance(p.0[0], p.0[1], p.0[2]))
            .collect(),
        DynamicImage::ImageRgba8(buf) => buf
            .pixels()
            .map(|p| luminance(p.0[0], p.0[1], p.0[2]))
            .collect(),
        other => {
            return Err(Error::UnsupportedImage {
                path: path.to_path_buf(),
                message: format!("{:?} is not an 8-bit gray or RGB layout", other.color()),
            })
        }
    };
    GrayImage::new(w, h, data)
}

/// Per-axis overlap table for exact area averaging.
///
/// Coordinates are scaled so that a source pixel spans `dst` units and an
/// output pixel spans `src` units; all overlaps are then integers.
fn box_weights(src: usize, dst: usize) -> Vec<Vec<(usize, u64)>> {
    (0..dst)
        .map(|o| {
            let lo = o * src;
            let hi = (o + 1) * src;
            let first = lo / dst;
            let last = (hi - 1) / dst;
            (first..=last)
                .filter_map(|s| {
                    let s_lo = s * dst;
                    let s_hi = (s + 1) * dst;
                    let overlap = hi.min(s_hi).saturating_sub(lo.max(s_lo));
                    (overlap > 0).then_some((s, overlap as u64))
                })
                .collect()
        })
        .collect()
}

/// Area-average (box filter) downsampling. Output values are rounded half-up.
pub fn resize(img: &GrayImage, target_w: usize, target_h: usize) -> Result<GrayImage> {
    if target_w == 0 || target_h == 0 {
        return Err(Error::InvalidArgument(
            "target dimensions must be at least 1".into(),
        ));
    }
    if target_w > img.width || target_h > img.height {
        return Err(Error::InvalidArgument(format!(
            "upscaling {}x{} to {target_w}x{target_h} is not supported",
            img.width, img.height
        )));
    }
    if target_w == img.width && target_h == img.height {
        return Ok(img.clone());
    }
    let wx = box_weights(img.width, target_w);
    let wy = box_weights(img.height, target_h);

    // horizontal pass: each entry carries a total weight of img.width
    let mut partial = vec![0u64; img.height * target_w];
    for r in 0..img.height {
        let row = &img.data[r * img.width..(r + 1) * img.width];
        for (x, taps) in wx.iter().enumerate() {
            partial[r * target_w + x] = taps
                .iter()
                .map(|&(s, w)| w * u64::from(row[s]))
                .sum();
        }
    }

    let denom = (img.width as u64) * (img.height as u64);
    let mut out = Vec::with_capacity(target_w * target_h);
    for taps in &wy {
        for x in 0..target_w {
            let acc: u64 = taps
                .iter()
                .map(|&(s, w)| w * partial[s * target_w + x])
                .sum();
            let rounded = (2 * acc + denom) / (2 * denom);
            out.push(rounded.min(255) as u8);
        }
    }
    GrayImage::new(target_w, target_h, out)
}

/// Maps 8-bit intensities onto `levels` gray levels: `floor(v * levels / 256)`.
pub fn quantize(img: &GrayImage, levels: usize) -> Result<QuantizedImage> {
    check_levels(levels)?;
    let data = img
        .data
        .iter()
        .map(|&v| ((usize::from(v) * levels) / 256) as u8)
        .collect();
    Ok(QuantizedImage {
        width: img.width,
        height: img.height,
        levels,
        data,
    })
}
