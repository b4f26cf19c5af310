//! Seeded synthetic texture dataset: oriented sinusoidal gratings,
//! Gaussian-smoothed noise and sums of Gaussian blobs.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::GrayImage;
use crate::pipeline::{derive_seed, Dataset};

pub const SYNTH_CLASSES: [&str; 3] = ["grating", "noise", "blob"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub per_class: usize,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    /// Grating period in pixels.
    pub grating_period: f64,
    /// Standard deviation (pixels) of the kernel smoothing the noise class.
    pub noise_corr_len: f64,
    /// Standard deviation (pixels) of each blob.
    pub blob_scale: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            per_class: 20,
            width: 64,
            height: 64,
            seed: 0,
            grating_period: 64.0 / 12.0,
            noise_corr_len: 2.0,
            blob_scale: 8.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.per_class == 0 || self.width < 8 || self.height < 8 {
            return Err(Error::InvalidArgument(
                "synthetic set needs per_class >= 1 and images of at least 8x8".into(),
            ));
        }
        for (name, v) in [
            ("grating_period", self.grating_period),
            ("noise_corr_len", self.noise_corr_len),
            ("blob_scale", self.blob_scale),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Per-image jitter factor in [0.9, 1.1].
fn jitter<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(0.9..=1.1)
}

fn to_image(w: usize, h: usize, values: &[f64]) -> GrayImage {
    let data = values.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect();
    GrayImage::new(w, h, data).expect("sized buffer")
}

fn grating<R: Rng>(cfg: &SynthConfig, rng: &mut R) -> Vec<f64> {
    let freq = 1.0 / (cfg.grating_period * jitter(rng));
    let theta = rng.random_range(0.0..PI);
    let phase = rng.random_range(0.0..2.0 * PI);
    let (s, c) = theta.sin_cos();
    let mut v = Vec::with_capacity(cfg.width * cfg.height);
    for y in 0..cfg.height {
        for x in 0..cfg.width {
            let t = 2.0 * PI * freq * (x as f64 * c + y as f64 * s) + phase;
            let n: f64 = StandardNormal.sample(rng);
            v.push(128.0 + 70.0 * t.sin() + 6.0 * n);
        }
    }
    v
}

/// Separable Gaussian blur with periodic boundaries.
fn blur(w: usize, h: usize, src: &[f64], sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-r..=r).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let norm: f64 = kernel.iter().sum();
    let wrap = |i: isize, n: usize| i.rem_euclid(n as isize) as usize;
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = (-r..=r)
                .map(|d| kernel[(d + r) as usize] * src[y * w + wrap(x as isize + d, w)])
                .sum::<f64>()
                / norm;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = (-r..=r)
                .map(|d| kernel[(d + r) as usize] * tmp[wrap(y as isize + d, h) * w + x])
                .sum::<f64>()
                / norm;
        }
    }
    out
}

fn smooth_noise<R: Rng>(cfg: &SynthConfig, rng: &mut R) -> Vec<f64> {
    let (w, h) = (cfg.width, cfg.height);
    let white: Vec<f64> = (0..w * h).map(|_| StandardNormal.sample(rng)).collect();
    let field = blur(w, h, &white, cfg.noise_corr_len * jitter(rng));
    let mean = field.iter().sum::<f64>() / field.len() as f64;
    let sd = (field.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / field.len() as f64).sqrt();
    field.iter().map(|v| 128.0 + 40.0 * (v - mean) / sd.max(1e-12)).collect()
}

fn blobs<R: Rng>(cfg: &SynthConfig, rng: &mut R) -> Vec<f64> {
    let (w, h) = (cfg.width, cfg.height);
    let scale = cfg.blob_scale * jitter(rng);
    let count = ((w * h) as f64 / (4.0 * scale * scale)).round().max(1.0) as usize;
    let mut v = vec![128.0; w * h];
    for _ in 0..count {
        let cx = rng.random_range(0.0..w as f64);
        let cy = rng.random_range(0.0..h as f64);
        let amp = rng.random_range(40.0..80.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        for y in 0..h {
            for x in 0..w {
                let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
                v[y * w + x] += amp * (-d2 / (2.0 * scale * scale)).exp();
            }
        }
    }
    v
}

/// Image `index` of class `class` (an index into [`SYNTH_CLASSES`]).
pub fn generate_image(cfg: &SynthConfig, class: usize, index: usize) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[class as u64, index as u64]));
    let values = match class {
        0 => grating(cfg, &mut rng),
        1 => smooth_noise(cfg, &mut rng),
        _ => blobs(cfg, &mut rng),
    };
    to_image(cfg.width, cfg.height, &values)
}

/// The whole set, class-major, as an in-memory dataset.
pub fn generate_dataset(cfg: &SynthConfig) -> Result<Dataset> {
    cfg.validate()?;
    let mut images = Vec::new();
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    for class in 0..SYNTH_CLASSES.len() {
        for i in 0..cfg.per_class {
            images.push(generate_image(cfg, class, i));
            labels.push(class);
            ids.push(file_name(class, i));
        }
    }
    Dataset::new(images, labels, SYNTH_CLASSES.iter().map(|s| s.to_string()).collect(), ids)
}

fn file_name(class: usize, index: usize) -> String {
    format!("{}_{index:03}", SYNTH_CLASSES[class])
}

/// Writes `images/<class>_<nnn>.png` and `manifest.csv` (relative paths)
/// under `out_dir`; returns the manifest path.
pub fn write_synthetic(cfg: &SynthConfig, out_dir: &Path) -> Result<PathBuf> {
    cfg.validate()?;
    let img_dir = out_dir.join("images");
    fs::create_dir_all(&img_dir).map_err(|e| Error::io(&img_dir, e))?;
    let manifest = out_dir.join("manifest.csv");
    let mut w = csv::Writer::from_path(&manifest)?;
    w.write_record(["path", "label", "subject"])?;
    for class in 0..SYNTH_CLASSES.len() {
        for i in 0..cfg.per_class {
            let name = file_name(class, i);
            let rel = format!("images/{name}.png");
            generate_image(cfg, class, i).save_png(out_dir.join(&rel))?;
            w.write_record([rel.as_str(), SYNTH_CLASSES[class], name.as_str()])?;
        }
    }
    w.flush().map_err(|e| Error::io(&manifest, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let cfg = SynthConfig::default();
        for class in 0..3 {
            assert_eq!(generate_image(&cfg, class, 4), generate_image(&cfg, class, 4));
            assert_ne!(generate_image(&cfg, class, 4), generate_image(&cfg, class, 5));
        }
        let other = SynthConfig { seed: 1, ..cfg };
        assert_ne!(generate_image(&cfg, 0, 0), generate_image(&other, 0, 0));
    }

    #[test]
    fn dataset_shape() {
        let cfg = SynthConfig {
            per_class: 3,
            width: 16,
            height: 12,
            ..SynthConfig::default()
        };
        let ds = generate_dataset(&cfg).unwrap();
        assert_eq!(ds.len(), 9);
        assert_eq!(ds.labels(), &[0, 0, 0, 1, 1, 1, 2, 2, 2]);
        assert_eq!(ds.image(0).width(), 16);
        assert!(generate_dataset(&SynthConfig { width: 4, ..cfg }).is_err());
    }

    #[test]
    fn blur_preserves_constant_fields() {
        let out = blur(7, 5, &[3.0; 35], 1.5);
        assert!(out.iter().all(|v| (v - 3.0).abs() < 1e-12));
    }
}
