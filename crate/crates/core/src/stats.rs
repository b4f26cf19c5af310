//! Kruskal–Wallis screening of features across classes with
//! Benjamini–Hochberg adjustment, plus per-class box-plot summaries.

use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dimred::class_list;
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::preprocess::quantile_sorted;

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalWallis {
    pub h: f64,
    pub p: f64,
    pub df: usize,
}

/// Midranks (1-based) of `values`, plus `Σ(t³ − t)` over tie groups.
pub fn midranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Tie-corrected Kruskal–Wallis H with a chi-square p-value on `groups − 1`
/// degrees of freedom. When every value is identical H is 0 and p is 1.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<KruskalWallis> {
    if groups.len() < 2 {
        return Err(Error::InsufficientData(
            "Kruskal-Wallis needs at least two groups".into(),
        ));
    }
    if groups.iter().any(|g| g.as_ref().is_empty()) {
        return Err(Error::Empty("Kruskal-Wallis group"));
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.as_ref().iter().copied()).collect();
    if pooled.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Kruskal-Wallis input"));
    }
    let df = groups.len() - 1;
    let n = pooled.len() as f64;
    let (ranks, ties) = midranks(&pooled);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(KruskalWallis { h: 0.0, p: 1.0, df });
    }
    let centre = (n + 1.0) / 2.0;
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let len = g.as_ref().len();
        let mean_rank = ranks[offset..offset + len].iter().sum::<f64>() / len as f64;
        sum += len as f64 * (mean_rank - centre).powi(2);
        offset += len;
    }
    let h = 12.0 / (n * (n + 1.0)) * sum / correction;
    let chi = ChiSquared::new(df as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(KruskalWallis {
        h,
        p: chi.sf(h).clamp(0.0, 1.0),
        df,
    })
}

/// Benjamini–Hochberg step-up adjusted p-values, in input order.
pub fn benjamini_hochberg(pvals: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = pvals.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("p-value {p} outside [0, 1]")));
    }
    let m = pvals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvals[a].total_cmp(&pvals[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for rank in (0..m).rev() {
        let i = order[rank];
        running = running.min(pvals[i] * m as f64 / (rank + 1) as f64);
        // the max guards against p·m/j rounding below p when j = m
        adjusted[i] = running.min(1.0).max(pvals[i]);
    }
    Ok(adjusted)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceRow {
    pub feature: String,
    pub h: f64,
    pub p_raw: f64,
    pub p_adj: f64,
    pub significant: bool,
}

/// Five-number summary of one feature within one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotRow {
    pub feature: String,
    pub class: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceReport {
    pub alpha: f64,
    pub rows: Vec<SignificanceRow>,
    /// Feature-major, classes ascending within each feature.
    pub boxplots: Vec<BoxplotRow>,
}

impl SignificanceReport {
    pub fn significant_count(&self) -> usize {
        self.rows.iter().filter(|r| r.significant).count()
    }
}

/// Tests every column of `f` across the classes in `labels`, adjusts across
/// columns, and flags adjusted p < `alpha`.
pub fn significance_report<S: AsRef<str>>(
    f: &FeatureMatrix,
    labels: &[usize],
    feature_names: &[S],
    alpha: f64,
) -> Result<SignificanceReport> {
    if f.rows() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: f.rows(),
            actual: labels.len(),
        });
    }
    if feature_names.len() != f.cols() {
        return Err(Error::DimensionMismatch {
            expected: f.cols(),
            actual: feature_names.len(),
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let classes = class_list(labels);
    let mut tests = Vec::with_capacity(f.cols());
    let mut boxplots = Vec::new();
    for j in 0..f.cols() {
        let groups: Vec<Vec<f64>> = classes
            .iter()
            .map(|&c| {
                (0..f.rows())
                    .filter(|&i| labels[i] == c)
                    .map(|i| f.get(i, j))
                    .collect()
            })
            .collect();
        tests.push(kruskal_wallis(&groups)?);
        for (&c, g) in classes.iter().zip(&groups) {
            let mut s = g.clone();
            s.sort_by(f64::total_cmp);
            boxplots.push(BoxplotRow {
                feature: feature_names[j].as_ref().to_string(),
                class: c,
                min: s[0],
                q1: quantile_sorted(&s, 0.25),
                median: quantile_sorted(&s, 0.5),
                q3: quantile_sorted(&s, 0.75),
                max: s[s.len() - 1],
            });
        }
    }
    let raw: Vec<f64> = tests.iter().map(|t| t.p).collect();
    let adjusted = benjamini_hochberg(&raw)?;
    let rows = tests
        .iter()
        .zip(adjusted)
        .zip(feature_names)
        .map(|((t, p_adj), name)| SignificanceRow {
            feature: name.as_ref().to_string(),
            h: t.h,
            p_raw: t.p,
            p_adj,
            significant: p_adj < alpha,
        })
        .collect();
    Ok(SignificanceReport {
        alpha,
        rows,
        boxplots,
    })
}

pub fn write_significance_csv<W: Write>(report: &SignificanceReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["feature", "H", "p_raw", "p_adj", "significant"])?;
    for r in &report.rows {
        w.write_record([
            r.feature.clone(),
            r.h.to_string(),
            r.p_raw.to_string(),
            r.p_adj.to_string(),
            r.significant.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Long-format box-plot table; `class_names[c]` labels class id `c`.
pub fn write_boxplot_csv<W: Write, S: AsRef<str>>(
    report: &SignificanceReport,
    class_names: &[S],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["feature", "class", "min", "q1", "median", "q3", "max"])?;
    for b in &report.boxplots {
        let class = class_names
            .get(b.class)
            .map_or_else(|| b.class.to_string(), |s| s.as_ref().to_string());
        w.write_record([
            b.feature.clone(),
            class,
            b.min.to_string(),
            b.q1.to_string(),
            b.median.to_string(),
            b.q3.to_string(),
            b.max.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
