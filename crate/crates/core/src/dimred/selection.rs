//! Univariate feature selection by the between/within-class variance ratio,
//! decomposed into one ranking per class pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// Score assigned when both classes have zero spread but distinct means.
pub const SEPARATION_SENTINEL: f64 = f64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature_index: usize,
    pub pair: (usize, usize),
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRanking {
    pub pair: (usize, usize),
    /// Best first; ties resolved towards the lower feature index.
    pub scores: Vec<FeatureScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Selected feature positions, ascending.
    pub indices: Vec<usize>,
    /// The same features in the order they were picked.
    pub pick_order: Vec<usize>,
    pub per_pair_ranking: Vec<PairRanking>,
}

fn mean_and_population_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// `J = (|μa − μ| + |μb − μ|) / (σa² + σb²)` over the samples of classes
/// `pair.0` and `pair.1`; `μ` is their pooled mean. Population variances.
pub fn fs_score(column: &[f64], labels: &[usize], pair: (usize, usize)) -> Result<f64> {
    if column.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: column.len(),
        });
    }
    let pick = |class: usize| -> Vec<f64> {
        column
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == class)
            .map(|(&v, _)| v)
            .collect()
    };
    let (a, b) = (pick(pair.0), pick(pair.1));
    if a.is_empty() || b.is_empty() || pair.0 == pair.1 {
        return Err(Error::InsufficientData(format!(
            "feature scoring needs samples of both classes {} and {}",
            pair.0, pair.1
        )));
    }
    let (mu_a, var_a) = mean_and_population_variance(&a);
    let (mu_b, var_b) = mean_and_population_variance(&b);
    let mu = (a.iter().sum::<f64>() + b.iter().sum::<f64>()) / (a.len() + b.len()) as f64;
    let numerator = (mu_a - mu).abs() + (mu_b - mu).abs();
    let denominator = var_a + var_b;
    Ok(if denominator > 0.0 {
        numerator / denominator
    } else if numerator > 0.0 {
        SEPARATION_SENTINEL
    } else {
        0.0
    })
}

/// Sorted distinct labels.
pub fn class_list(labels: &[usize]) -> Vec<usize> {
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    classes
}

/// All unordered class pairs in lexicographic order.
pub fn class_pairs(classes: &[usize]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, &a) in classes.iter().enumerate() {
        for &b in &classes[i + 1..] {
            pairs.push((a, b));
        }
    }
    pairs
}

pub fn rank_features(f: &FeatureMatrix, labels: &[usize], pair: (usize, usize)) -> Result<PairRanking> {
    let mut scores = (0..f.cols())
        .map(|j| {
            Ok(FeatureScore {
                feature_index: j,
                pair,
                score: fs_score(&f.column(j), labels, pair)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    scores.sort_by(|x, y| {
        y.score
            .total_cmp(&x.score)
            .then(x.feature_index.cmp(&y.feature_index))
    });
    Ok(PairRanking { pair, scores })
}

/// Round-robin union of the per-pair rankings: each pair in turn
/// contributes its best feature not yet selected, until `target_count`
/// distinct features are chosen.
pub fn select_features(
    f: &FeatureMatrix,
    labels: &[usize],
    target_count: usize,
) -> Result<SelectionResult> {
    if labels.len() != f.rows() {
        return Err(Error::DimensionMismatch {
            expected: f.rows(),
            actual: labels.len(),
        });
    }
    if target_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "at least 2 features must be selected, got {target_count}"
        )));
    }
    if target_count > f.cols() {
        return Err(Error::InvalidArgument(format!(
            "cannot select {target_count} of {} features",
            f.cols()
        )));
    }
    let classes = class_list(labels);
    if classes.len() < 2 {
        return Err(Error::InsufficientData(
            "feature selection needs at least two classes".into(),
        ));
    }
    let rankings = class_pairs(&classes)
        .into_iter()
        .map(|pair| rank_features(f, labels, pair))
        .collect::<Result<Vec<_>>>()?;

    let mut selected = vec![false; f.cols()];
    let mut cursors = vec![0usize; rankings.len()];
    let mut pick_order = Vec::with_capacity(target_count);
    'outer: loop {
        for (ranking, cursor) in rankings.iter().zip(cursors.iter_mut()) {
            if pick_order.len() == target_count {
                break 'outer;
            }
            while selected[ranking.scores[*cursor].feature_index] {
                *cursor += 1;
            }
            let feature = ranking.scores[*cursor].feature_index;
            selected[feature] = true;
            pick_order.push(feature);
        }
    }
    let mut indices = pick_order.clone();
    indices.sort_unstable();
    Ok(SelectionResult {
        indices,
        pick_order,
        per_pair_ranking: rankings,
    })
}
