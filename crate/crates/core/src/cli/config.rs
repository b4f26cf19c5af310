use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::design::{parse_design_list, ModelVector};
use crate::error::{Error, Result};
use crate::stats::DEFAULT_ALPHA;
use crate::synth::SynthConfig;
use crate::texture::TextureParams;

pub const DEFAULT_SIZE: (usize, usize) = (204, 154);

/// Target image geometry: a fixed size or the files' own size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSize {
    Fixed(usize, usize),
    Native,
}

impl std::str::FromStr for ImageSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("native") {
            return Ok(ImageSize::Native);
        }
        let bad = || Error::Parse(format!("image size must be WxH or 'native', got '{s}'"));
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let w: usize = w.trim().parse().map_err(|_| bad())?;
        let h: usize = h.trim().parse().map_err(|_| bad())?;
        if w < 8 || h < 8 {
            return Err(Error::InvalidArgument(format!("image size must be at least 8x8, got {w}x{h}")));
        }
        Ok(ImageSize::Fixed(w, h))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
    pub size: ImageSize,
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub designs: Vec<ModelVector>,
    pub alpha: f64,
    pub texture: TextureParams,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 5,
            budget: 300,
            seed: 0,
            size: ImageSize::Fixed(DEFAULT_SIZE.0, DEFAULT_SIZE.1),
            workers: None,
            out: PathBuf::from("out"),
            designs: ModelVector::all(),
            alpha: DEFAULT_ALPHA,
            texture: TextureParams::default(),
            synth: SynthConfig::default(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value '{v}' for '{key}'")))
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let v = value.trim();
        let t = &mut self.texture;
        match key.as_str() {
            "k" => self.k = parse(&key, v)?,
            "b" | "budget" => self.budget = parse(&key, v)?,
            "seed" => self.seed = parse(&key, v)?,
            "size" => self.size = v.parse()?,
            "workers" => self.workers = Some(parse(&key, v)?),
            "out" => self.out = PathBuf::from(v),
            "designs" => self.designs = parse_design_list(v)?,
            "alpha" => self.alpha = parse(&key, v)?,
            "fos_levels" => t.fos_levels = parse(&key, v)?,
            "glds_levels" => t.glds_levels = parse(&key, v)?,
            "glds_distance" => t.glds_distance = parse(&key, v)?,
            "glcm_levels" => t.glcm_levels = parse(&key, v)?,
            "glcm_distance" => t.glcm_distance = parse(&key, v)?,
            "glrlm_levels" => t.glrlm_levels = parse(&key, v)?,
            "adf_angle_step" => t.adf_angle_step = parse(&key, v)?,
            "rdf_radius_step" => t.rdf_radius_step = parse(&key, v)?,
            "per_class" => self.synth.per_class = parse(&key, v)?,
            "width" => self.synth.width = parse(&key, v)?,
            "height" => self.synth.height = parse(&key, v)?,
            "grating_period" => self.synth.grating_period = parse(&key, v)?,
            "noise_corr_len" => self.synth.noise_corr_len = parse(&key, v)?,
            "blob_scale" => self.synth.blob_scale = parse(&key, v)?,
            _ => return Err(Error::Parse(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a configuration document: a JSON object, or `key = value`
    /// lines with `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        if text.trim_start().starts_with('{') {
            let doc: serde_json::Map<String, Value> = serde_json::from_str(text)?;
            for (k, v) in doc {
                let s = match v {
                    Value::String(s) => s,
                    Value::Array(items) => items
                        .iter()
                        .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_string))
                        .collect::<Vec<_>>()
                        .join(";"),
                    other => other.to_string(),
                };
                self.set(&k, &s)?;
            }
            return Ok(());
        }
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!("K must be at least 2, got {}", self.k)));
        }
        if self.budget < 1 {
            return Err(Error::InvalidArgument("B must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must be in (0, 1), got {}", self.alpha)));
        }
        self.texture.validate()?;
        self.synth.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_and_json_agree() {
        let mut a = RunConfig::default();
        a.apply_text("# comment\nk = 4\nb=10\nsize = 64x48\ndesigns = FS,DC,SVM-LK; AF,None,DT\nglcm_levels=64\n")
            .unwrap();
        let mut b = RunConfig::default();
        b.apply_text(r#"{"k": 4, "b": 10, "size": "64x48", "designs": ["FS,DC,SVM-LK", "AF,None,DT"], "glcm_levels": 64}"#)
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.size, ImageSize::Fixed(64, 48));
        assert_eq!(a.designs.len(), 2);
        assert_eq!(a.texture.glcm_levels, 64);
    }

    #[test]
    fn bad_settings() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("nonsense = 1").is_err());
        assert!(c.apply_text("k 5").is_err());
        assert!(c.set("k", "five").is_err());
        assert!("4x4".parse::<ImageSize>().is_err());
        assert_eq!("native".parse::<ImageSize>().unwrap(), ImageSize::Native);
        c.k = 1;
        assert!(c.validate().is_err());
    }
}
