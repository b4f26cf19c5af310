//! Model designs: feature selection or all features, LDA compression or
//! none, and the classifier family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::{ClassifierSpec, Criterion};
use crate::error::{Error, Result};
use crate::hyperopt::HyperParamVector;
use crate::texture::TextureParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Selection {
    /// Variance-ratio feature selection.
    Fs,
    /// All features.
    Af,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Compression {
    /// Fisher LDA to `classes − 1` dimensions.
    Dc,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    SvmLk,
    SvmRbf,
    Dt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct ModelVector {
    pub selection: Selection,
    pub compression: Compression,
    pub classifier: ClassifierKind,
}

impl ModelVector {
    pub const fn new(selection: Selection, compression: Compression, classifier: ClassifierKind) -> Self {
        Self {
            selection,
            compression,
            classifier,
        }
    }

    /// All twelve designs: selection outermost, then compression, then
    /// classifier.
    pub fn all() -> Vec<ModelVector> {
        let mut v = Vec::with_capacity(12);
        for s in [Selection::Fs, Selection::Af] {
            for c in [Compression::Dc, Compression::None] {
                for k in [ClassifierKind::SvmLk, ClassifierKind::SvmRbf, ClassifierKind::Dt] {
                    v.push(ModelVector::new(s, c, k));
                }
            }
        }
        v
    }

    /// Underscore-separated form usable in file names, e.g. `FS_DC_SVM-LK`.
    pub fn file_stem(&self) -> String {
        self.to_string().replace(',', "_")
    }

    /// Inclusive range for the number of selected features, when selection
    /// is active.
    pub fn fs_count_range(&self) -> Option<(i64, i64)> {
        match (self.selection, self.compression) {
            (Selection::Af, _) => None,
            (Selection::Fs, Compression::None) => Some((2, 38)),
            (Selection::Fs, Compression::Dc) => Some((3, 38)),
        }
    }

    /// Translates a parameter vector drawn from this design's search space.
    pub fn decode(&self, p: &HyperParamVector) -> Result<DesignParams> {
        let level = |name: &str| -> Result<usize> { to_usize(name, p.int(name)?) };
        let texture = TextureParams {
            fos_levels: level("fos_levels")?,
            glds_levels: level("glds_levels")?,
            glds_distance: level("glds_distance")?,
            glcm_levels: level("glcm_levels")?,
            glcm_distance: level("glcm_distance")?,
            glrlm_levels: level("glrlm_levels")?,
            adf_angle_step: level("adf_angle_step")?,
            rdf_radius_step: level("rdf_radius_step")?,
        };
        texture.validate()?;
        let fs_count = match self.selection {
            Selection::Fs => Some(to_usize("fs_count", p.int("fs_count")?)?),
            Selection::Af => None,
        };
        let classifier = match self.classifier {
            ClassifierKind::SvmLk => ClassifierSpec::SvmLinear { c: p.float("svm_c")? },
            ClassifierKind::SvmRbf => ClassifierSpec::SvmRbf {
                c: p.float("svm_c")?,
                gamma: p.float("svm_gamma")?,
            },
            ClassifierKind::Dt => ClassifierSpec::Tree {
                criterion: p.category("dt_criterion")?.parse::<Criterion>()?,
                max_depth: to_usize("dt_max_depth", p.int("dt_max_depth")?)?,
            },
        };
        Ok(DesignParams {
            texture,
            fs_count,
            classifier,
        })
    }
}

fn to_usize(name: &str, v: i64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::InvalidArgument(format!("{name} must be non-negative, got {v}")))
}

/// Concrete settings for one evaluation of a design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub texture: TextureParams,
    pub fs_count: Option<usize>,
    pub classifier: ClassifierSpec,
}

impl fmt::Display for ModelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.selection {
            Selection::Fs => "FS",
            Selection::Af => "AF",
        };
        let c = match self.compression {
            Compression::Dc => "DC",
            Compression::None => "None",
        };
        let k = match self.classifier {
            ClassifierKind::SvmLk => "SVM-LK",
            ClassifierKind::SvmRbf => "SVM-RBF",
            ClassifierKind::Dt => "DT",
        };
        write!(f, "{s},{c},{k}")
    }
}

impl FromStr for ModelVector {
    type Err = Error;

    /// Accepts `FS,DC,SVM-LK`, also with `+`, `_` or `/` as separators.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<String> = s
            .split([',', '+', '_', '/'])
            .map(|p| p.trim().to_ascii_uppercase())
            .collect();
        let bad = || Error::Parse(format!("unknown model design '{s}'"));
        let [a, b, c] = parts.as_slice() else {
            return Err(bad());
        };
        let selection = match a.as_str() {
            "FS" => Selection::Fs,
            "AF" => Selection::Af,
            _ => return Err(bad()),
        };
        let compression = match b.as_str() {
            "DC" => Compression::Dc,
            "NONE" => Compression::None,
            _ => return Err(bad()),
        };
        let classifier = match c.as_str() {
            "SVM-LK" | "LK" => ClassifierKind::SvmLk,
            "SVM-RBF" | "RBF" => ClassifierKind::SvmRbf,
            "DT" => ClassifierKind::Dt,
            _ => return Err(bad()),
        };
        Ok(ModelVector::new(selection, compression, classifier))
    }
}

impl From<ModelVector> for String {
    fn from(m: ModelVector) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for ModelVector {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Parses a `;`-separated list of designs; `all` selects every design.
pub fn parse_design_list(s: &str) -> Result<Vec<ModelVector>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(ModelVector::all());
    }
    let mut out = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let m: ModelVector = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty design list".into()));
    }
    // keep the canonical enumeration order
    let all = ModelVector::all();
    out.sort_by_key(|m| all.iter().position(|a| a == m));
    Ok(out)
}
