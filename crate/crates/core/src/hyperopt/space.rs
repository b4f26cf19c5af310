use std::fmt;

use serde::{Deserialize, Serialize};

use crate::design::{ClassifierKind, ModelVector};
use crate::error::{Error, Result};
use crate::imageio::ALLOWED_LEVELS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Category(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Category(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Categorical(Vec<ParamValue>),
    Int { lo: i64, hi: i64 },
    Float { lo: f64, hi: f64, log: bool },
}

impl Domain {
    pub fn contains(&self, v: &ParamValue) -> bool {
        match (self, v) {
            (Domain::Categorical(choices), v) => choices.contains(v),
            (Domain::Int { lo, hi }, ParamValue::Int(x)) => lo <= x && x <= hi,
            (Domain::Float { lo, hi, .. }, ParamValue::Float(x)) => *lo <= *x && *x <= *hi,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub name: String,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    dims: Vec<Dimension>,
}

impl SearchSpace {
    pub fn new(dims: Vec<Dimension>) -> Result<Self> {
        for (i, d) in dims.iter().enumerate() {
            if dims[..i].iter().any(|e| e.name == d.name) {
                return Err(Error::InvalidArgument(format!("duplicate dimension '{}'", d.name)));
            }
            let ok = match &d.domain {
                Domain::Categorical(c) => !c.is_empty(),
                Domain::Int { lo, hi } => lo <= hi,
                Domain::Float { lo, hi, log } => {
                    lo.is_finite() && hi.is_finite() && lo < hi && (!log || *lo > 0.0)
                }
            };
            if !ok {
                return Err(Error::InvalidArgument(format!("empty or invalid range for '{}'", d.name)));
            }
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.dims.iter().map(|d| d.name.as_str()).collect()
    }

    pub fn contains(&self, p: &HyperParamVector) -> bool {
        p.values.len() == self.dims.len()
            && self
                .dims
                .iter()
                .zip(&p.values)
                .all(|(d, (n, v))| *n == d.name && d.domain.contains(v))
    }
}

fn levels() -> Domain {
    Domain::Categorical(ALLOWED_LEVELS.iter().map(|&l| ParamValue::Int(l as i64)).collect())
}

fn steps() -> Domain {
    Domain::Int { lo: 1, hi: 4 }
}

fn dim(name: &str, domain: Domain) -> Dimension {
    Dimension {
        name: name.to_string(),
        domain,
    }
}

pub const COST_RANGE: (f64, f64) = (1e-4, 1e4);

/// The search space of one design: the eight texture parameters, the
/// selected-feature count when selection is on, and the classifier's own
/// parameters.
pub fn build_space(m: &ModelVector) -> SearchSpace {
    let mut dims = vec![
        dim("fos_levels", levels()),
        dim("glds_levels", levels()),
        dim("glds_distance", steps()),
        dim("glcm_levels", levels()),
        dim("glcm_distance", steps()),
        dim("glrlm_levels", levels()),
        dim("adf_angle_step", steps()),
        dim("rdf_radius_step", steps()),
    ];
    if let Some((lo, hi)) = m.fs_count_range() {
        dims.push(dim("fs_count", Domain::Int { lo, hi }));
    }
    let log_range = || Domain::Float {
        lo: COST_RANGE.0,
        hi: COST_RANGE.1,
        log: true,
    };
    match m.classifier {
        ClassifierKind::SvmLk => dims.push(dim("svm_c", log_range())),
        ClassifierKind::SvmRbf => {
            dims.push(dim("svm_c", log_range()));
            dims.push(dim("svm_gamma", log_range()));
        }
        ClassifierKind::Dt => {
            dims.push(dim(
                "dt_criterion",
                Domain::Categorical(
                    ["gini", "entropy", "log_loss"]
                        .iter()
                        .map(|s| ParamValue::Category(s.to_string()))
                        .collect(),
                ),
            ));
            dims.push(dim("dt_max_depth", Domain::Int { lo: 1, hi: 5 }));
        }
    }
    SearchSpace::new(dims).expect("built-in space is valid")
}

/// Named parameter values in the order of their space's dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParamVector {
    pub values: Vec<(String, ParamValue)>,
}

impl HyperParamVector {
    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn missing(name: &str, kind: &str) -> Error {
        Error::InvalidArgument(format!("parameter '{name}' missing or not {kind}"))
    }

    pub fn int(&self, name: &str) -> Result<i64> {
        match self.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            _ => Err(Self::missing(name, "an integer")),
        }
    }

    pub fn float(&self, name: &str) -> Result<f64> {
        match self.get(name) {
            Some(ParamValue::Float(v)) => Ok(*v),
            Some(ParamValue::Int(v)) => Ok(*v as f64),
            _ => Err(Self::missing(name, "a number")),
        }
    }

    pub fn category(&self, name: &str) -> Result<&str> {
        match self.get(name) {
            Some(ParamValue::Category(s)) => Ok(s),
            _ => Err(Self::missing(name, "a category")),
        }
    }
}
