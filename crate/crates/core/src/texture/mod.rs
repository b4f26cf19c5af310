//! The six texture analyses and the fixed 39-slot feature vector.
//!
//! Slot order: FOS (7), GLDS (7), GLCM (6), GLRLM (5), ADF (7), RDF (7).
//! Within the moment-based methods the statistics are ordered mean,
//! contrast, variance, skewness, kurtosis, energy, entropy.

mod distribution;
mod fos;
mod glcm;
mod glds;
mod glrlm;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::{quantize, GrayImage, ALLOWED_LEVELS};

pub use distribution::{dist_stats, DistStats, Distribution1D};
pub use fos::{fos_features, gray_histogram};
pub use glcm::{glcm_direction_stats, glcm_features, glcm_matrix_stats, CoocMatrix, GlcmStats};
pub use glds::{difference_counts, glds_direction_stats, glds_features};
pub use glrlm::{glrlm_direction_stats, glrlm_features, scan_lines, GlrlmStats, RunLengthMatrix};
pub use spectrum::{
    adf_features, adf_features_from_spectrum, angular_distribution, power_spectrum,
    radial_distribution, rdf_features, rdf_features_from_spectrum, PowerSpectrum,
};

pub const FEATURE_COUNT: usize = 39;

/// Canonical feature identifiers in slot order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "fos_mean",
    "fos_contrast",
    "fos_variance",
    "fos_skewness",
    "fos_kurtosis",
    "fos_energy",
    "fos_entropy",
    "glds_mean",
    "glds_contrast",
    "glds_variance",
    "glds_skewness",
    "glds_kurtosis",
    "glds_energy",
    "glds_entropy",
    "glcm_contrast",
    "glcm_correlation",
    "glcm_joint_energy",
    "glcm_joint_entropy",
    "glcm_idm",
    "glcm_inverse_variance",
    "glrlm_sre",
    "glrlm_lre",
    "glrlm_gln",
    "glrlm_rln",
    "glrlm_rp",
    "adf_mean",
    "adf_contrast",
    "adf_variance",
    "adf_skewness",
    "adf_kurtosis",
    "adf_energy",
    "adf_entropy",
    "rdf_mean",
    "rdf_contrast",
    "rdf_variance",
    "rdf_skewness",
    "rdf_kurtosis",
    "rdf_energy",
    "rdf_entropy",
];

/// Pixel-pair / scan directions shared by GLDS, GLCM and GLRLM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Deg0,
        Direction::Deg45,
        Direction::Deg90,
        Direction::Deg135,
    ];

    /// `(row, col)` step for this direction at the given distance. Rows grow
    /// downward, so 45° points up and to the right.
    pub fn offset(self, distance: usize) -> (isize, isize) {
        let d = distance as isize;
        match self {
            Direction::Deg0 => (0, d),
            Direction::Deg45 => (-d, d),
            Direction::Deg90 => (d, 0),
            Direction::Deg135 => (d, d),
        }
    }
}

/// The texture analysis families, in slot order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Fos,
    Glds,
    Glcm,
    Glrlm,
    Adf,
    Rdf,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Fos,
        Method::Glds,
        Method::Glcm,
        Method::Glrlm,
        Method::Adf,
        Method::Rdf,
    ];

    /// Slot range of this method inside a [`FeatureVector`].
    pub fn slots(self) -> std::ops::Range<usize> {
        match self {
            Method::Fos => 0..7,
            Method::Glds => 7..14,
            Method::Glcm => 14..20,
            Method::Glrlm => 20..25,
            Method::Adf => 25..32,
            Method::Rdf => 32..39,
        }
    }

    /// The parameters this method reads, packed so equal keys imply equal
    /// outputs for the same image.
    pub fn param_key(self, p: &TextureParams) -> (usize, usize) {
        match self {
            Method::Fos => (p.fos_levels, 0),
            Method::Glds => (p.glds_levels, p.glds_distance),
            Method::Glcm => (p.glcm_levels, p.glcm_distance),
            Method::Glrlm => (p.glrlm_levels, 0),
            Method::Adf => (p.adf_angle_step, 0),
            Method::Rdf => (p.rdf_radius_step, 0),
        }
    }
}

/// Texture hyperparameters. Level counts take values in {4, 16, 64, 256};
/// distances and angular/radial steps in 1..=4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TextureParams {
    pub fos_levels: usize,
    pub glds_levels: usize,
    pub glds_distance: usize,
    pub glcm_levels: usize,
    pub glcm_distance: usize,
    pub glrlm_levels: usize,
    pub adf_angle_step: usize,
    pub rdf_radius_step: usize,
}

impl Default for TextureParams {
    fn default() -> Self {
        Self {
            fos_levels: 64,
            glds_levels: 64,
            glds_distance: 1,
            glcm_levels: 16,
            glcm_distance: 1,
            glrlm_levels: 16,
            adf_angle_step: 1,
            rdf_radius_step: 1,
        }
    }
}

impl TextureParams {
    pub fn validate(&self) -> Result<()> {
        let levels = [
            ("fos_levels", self.fos_levels),
            ("glds_levels", self.glds_levels),
            ("glcm_levels", self.glcm_levels),
            ("glrlm_levels", self.glrlm_levels),
        ];
        for (name, v) in levels {
            if !ALLOWED_LEVELS.contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be one of {ALLOWED_LEVELS:?}, got {v}"
                )));
            }
        }
        let steps = [
            ("glds_distance", self.glds_distance),
            ("glcm_distance", self.glcm_distance),
            ("adf_angle_step", self.adf_angle_step),
            ("rdf_radius_step", self.rdf_radius_step),
        ];
        for (name, v) in steps {
            if !(1..=4).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be in 1..=4, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The 39 texture features of one image in slot order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() != FEATURE_COUNT {
            return Err(Error::DimensionMismatch {
                expected: FEATURE_COUNT,
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature vector"));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn names() -> &'static [&'static str; FEATURE_COUNT] {
        &FEATURE_NAMES
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Computes one method's slot values. `spectrum` is reused for ADF/RDF when
/// supplied, otherwise computed from `img`.
pub fn method_features(
    img: &GrayImage,
    spectrum: Option<&PowerSpectrum>,
    method: Method,
    p: &TextureParams,
) -> Result<Vec<f64>> {
    let owned;
    let values = match method {
        Method::Fos => fos_features(&quantize(img, p.fos_levels)?)?.to_array().to_vec(),
        Method::Glds => glds_features(&quantize(img, p.glds_levels)?, p.glds_distance)?
            .to_array()
            .to_vec(),
        Method::Glcm => glcm_features(&quantize(img, p.glcm_levels)?, p.glcm_distance)?
            .to_array()
            .to_vec(),
        Method::Glrlm => glrlm_features(&quantize(img, p.glrlm_levels)?)?
            .to_array()
            .to_vec(),
        Method::Adf | Method::Rdf => {
            let ps = match spectrum {
                Some(ps) => ps,
                None => {
                    owned = power_spectrum(img)?;
                    &owned
                }
            };
            let stats = if method == Method::Adf {
                adf_features_from_spectrum(ps, p.adf_angle_step)?
            } else {
                rdf_features_from_spectrum(ps, p.rdf_radius_step)?
            };
            stats.to_array().to_vec()
        }
    };
    Ok(values)
}

/// Runs all six analyses and concatenates them in slot order. The spatial
/// methods see the image quantized to their own level count; the spectral
/// methods use raw intensities.
pub fn extract_features(img: &GrayImage, p: &TextureParams) -> Result<FeatureVector> {
    p.validate()?;
    let spectrum = power_spectrum(img)?;
    let mut values = Vec::with_capacity(FEATURE_COUNT);
    for method in Method::ALL {
        values.extend(method_features(img, Some(&spectrum), method, p)?);
    }
    FeatureVector::new(values)
}
