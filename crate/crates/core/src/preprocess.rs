//! Robust standardization: `z = (x - median) / IQR`, fitted on training rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// Linear-interpolation quantile at position `h = (n - 1) q` of the sorted
/// sample. `sorted` must be ascending and nonempty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sorts a copy of `values` and returns its `q`-quantile.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("quantile sample"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub medians: Vec<f64>,
    /// Interquartile ranges; a zero IQR is stored as 1.
    pub iqrs: Vec<f64>,
}

impl ScalerParams {
    pub fn len(&self) -> usize {
        self.medians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.medians.is_empty()
    }
}

pub fn fit_scaler(train: &FeatureMatrix) -> Result<ScalerParams> {
    if train.is_empty() || train.cols() == 0 {
        return Err(Error::Empty("feature matrix"));
    }
    if !train.all_finite() {
        return Err(Error::NonFinite("feature matrix"));
    }
    let mut medians = Vec::with_capacity(train.cols());
    let mut iqrs = Vec::with_capacity(train.cols());
    for c in 0..train.cols() {
        let mut col = train.column(c);
        col.sort_by(f64::total_cmp);
        medians.push(quantile_sorted(&col, 0.5));
        let iqr = quantile_sorted(&col, 0.75) - quantile_sorted(&col, 0.25);
        iqrs.push(if iqr > 0.0 { iqr } else { 1.0 });
    }
    Ok(ScalerParams { medians, iqrs })
}

pub fn apply_scaler(m: &FeatureMatrix, s: &ScalerParams) -> Result<FeatureMatrix> {
    if m.cols() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            actual: m.cols(),
        });
    }
    let mut out = m.clone();
    for r in 0..out.rows() {
        for (c, v) in out.row_mut(r).iter_mut().enumerate() {
            *v = (*v - s.medians[c]) / s.iqrs[c];
        }
    }
    Ok(out)
}
