use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::{complement, derive_seed, stratified_kfold, stratified_kfold_balanced};
use super::FeatureCache;
use crate::classify::TrainedClassifier;
use crate::design::{Compression, DesignParams, ModelVector, Selection};
use crate::dimred::{apply_lda, class_list, fit_lda, select_features, LdaModel, SelectionResult};
use crate::error::{Error, Result};
use crate::hyperopt::{build_space, optimize, HyperParamVector, Sampler, TrialRecord};
use crate::matrix::FeatureMatrix;
use crate::metrics::macro_f1;
use crate::preprocess::{apply_scaler, fit_scaler, ScalerParams};
use crate::texture::FEATURE_COUNT;

const STREAM_INNER_SPLIT: u64 = 1;
const STREAM_OPTIMIZER: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
    pub sampler: Sampler,
}

impl EvalConfig {
    pub fn new(k: usize, budget: usize, seed: u64) -> Self {
        Self {
            k,
            budget,
            seed,
            sampler: Sampler::default(),
        }
    }
}

/// What the reduction step learned from its fitting set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub selection: Option<SelectionResult>,
    pub lda: Option<LdaModel>,
}

/// Fits selection and/or LDA on `fit` and applies the same transform to
/// both matrices.
pub fn dimensionality_reduction(
    fit: &FeatureMatrix,
    fit_labels: &[usize],
    other: &FeatureMatrix,
    m: &ModelVector,
    fs_count: Option<usize>,
) -> Result<(FeatureMatrix, FeatureMatrix, Reduction)> {
    let mut a = fit.clone();
    let mut b = other.clone();
    let mut reduction = Reduction {
        selection: None,
        lda: None,
    };
    if m.selection == Selection::Fs {
        let target = fs_count.ok_or_else(|| {
            Error::InvalidArgument("feature selection requires a feature count".into())
        })?;
        let sel = select_features(&a, fit_labels, target)?;
        a = a.select_columns(&sel.indices);
        b = b.select_columns(&sel.indices);
        reduction.selection = Some(sel);
    }
    if m.compression == Compression::Dc {
        let d_out = class_list(fit_labels).len().saturating_sub(1);
        let lda = fit_lda(&a, fit_labels, d_out)?;
        a = apply_lda(&a, &lda)?;
        b = apply_lda(&b, &lda)?;
        reduction.lda = Some(lda);
    }
    Ok((a, b, reduction))
}

/// Everything fitted on the training side of one split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldArtifacts {
    pub scaler: ScalerParams,
    pub reduction: Reduction,
    pub model: TrainedClassifier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub train_score: f64,
    pub eval_score: f64,
    pub artifacts: FoldArtifacts,
    pub dims_after_fs: usize,
    pub dims_after_dc: usize,
}

/// Macro-F1 over the classes present in either label vector.
fn score(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    let mut classes: Vec<usize> = y_true.iter().chain(y_pred).copied().collect();
    classes.sort_unstable();
    classes.dedup();
    macro_f1(y_true, y_pred, &classes)
}

/// Extracts, scales, reduces and trains on `train_idx`, then scores both
/// `train_idx` and `eval_idx`. Nothing is fitted on `eval_idx`.
pub fn fit_and_score(
    cache: &FeatureCache,
    train_idx: &[usize],
    eval_idx: &[usize],
    m: &ModelVector,
    params: &DesignParams,
) -> Result<FitOutcome> {
    let labels = cache.dataset().labels();
    let y_train: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
    let y_eval: Vec<usize> = eval_idx.iter().map(|&i| labels[i]).collect();

    let raw_train = cache.features(train_idx, &params.texture)?;
    let raw_eval = cache.features(eval_idx, &params.texture)?;
    let scaler = fit_scaler(&raw_train)?;
    let train = apply_scaler(&raw_train, &scaler)?;
    let eval = apply_scaler(&raw_eval, &scaler)?;

    let (train, eval, reduction) = dimensionality_reduction(&train, &y_train, &eval, m, params.fs_count)?;
    let dims_after_fs = reduction
        .selection
        .as_ref()
        .map_or(FEATURE_COUNT, |s| s.indices.len());
    let dims_after_dc = train.cols();

    let model = params.classifier.train(&train, &y_train)?;
    let train_score = score(&y_train, &model.predict(&train)?)?;
    let eval_score = score(&y_eval, &model.predict(&eval)?)?;
    Ok(FitOutcome {
        train_score,
        eval_score,
        artifacts: FoldArtifacts {
            scaler,
            reduction,
            model,
        },
        dims_after_fs,
        dims_after_dc,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_params: HyperParamVector,
    pub best_trial: usize,
    /// Validation score of each inner fold for the best trial.
    pub best_fold_scores: Vec<f64>,
    pub failed_trials: usize,
    pub history: Vec<TrialRecord>,
}

/// Inner cross-validated hyperparameter search over the samples at
/// `train_idx`. A trial whose pipeline fails scores 0.
pub fn search_best_parameters(
    cache: &FeatureCache,
    train_idx: &[usize],
    m: &ModelVector,
    k: usize,
    budget: usize,
    seed: u64,
    sampler: &Sampler,
) -> Result<SearchResult> {
    let labels = cache.dataset().labels();
    let sub_labels: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
    let inner = stratified_kfold_balanced(&sub_labels, k, derive_seed(seed, &[STREAM_INNER_SPLIT]))?;
    let splits: Vec<(Vec<usize>, Vec<usize>)> = inner
        .iter()
        .map(|fold| {
            let fit: Vec<usize> = complement(train_idx.len(), fold).iter().map(|&p| train_idx[p]).collect();
            let val: Vec<usize> = fold.iter().map(|&p| train_idx[p]).collect();
            (fit, val)
        })
        .collect();

    let space = build_space(m);
    let mut per_trial: Vec<Vec<f64>> = Vec::with_capacity(budget);
    let mut failed = 0usize;
    let result = optimize(&space, budget, derive_seed(seed, &[STREAM_OPTIMIZER]), sampler, |trial, hp| {
        let scores = m.decode(hp).and_then(|params| {
            splits
                .par_iter()
                .map(|(fit, val)| fit_and_score(cache, fit, val, m, &params).map(|o| o.eval_score))
                .collect::<Result<Vec<f64>>>()
        });
        let scores = match scores {
            Ok(s) => s,
            Err(e) => {
                log::warn!("design {m}: trial {trial} failed and scores 0: {e}");
                failed += 1;
                vec![0.0; splits.len()]
            }
        };
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        per_trial.push(scores);
        Ok(mean)
    })?;
    Ok(SearchResult {
        best_value: result.best_value,
        best_fold_scores: per_trial[result.best_trial].clone(),
        best_params: result.best_params,
        best_trial: result.best_trial,
        failed_trials: failed,
        history: result.history,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterFoldResult {
    pub fold: usize,
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    pub search: SearchResult,
    pub params: DesignParams,
    pub outcome: FitOutcome,
}

/// Outer folds of a design evaluation. Designs evaluated with the same
/// seed share them.
pub fn outer_folds(cache: &FeatureCache, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    stratified_kfold(cache.dataset().labels(), k, seed)
}

/// One outer fold: inner search on the training part, refit with the best
/// parameters, score on train and test.
pub fn evaluate_outer_fold(
    cache: &FeatureCache,
    m: &ModelVector,
    folds: &[Vec<usize>],
    fold: usize,
    cfg: &EvalConfig,
) -> Result<OuterFoldResult> {
    let run = || -> Result<OuterFoldResult> {
        let test_idx = folds[fold].clone();
        let train_idx = complement(cache.dataset().len(), &test_idx);
        let fold_seed = derive_seed(cfg.seed, &[fold as u64]);
        let search = search_best_parameters(cache, &train_idx, m, cfg.k, cfg.budget, fold_seed, &cfg.sampler)?;
        let params = m.decode(&search.best_params)?;
        let outcome = fit_and_score(cache, &train_idx, &test_idx, m, &params)?;
        Ok(OuterFoldResult {
            fold,
            train_idx,
            test_idx,
            search,
            params,
            outcome,
        })
    };
    run().map_err(|e| Error::Fold {
        fold,
        source: Box::new(e),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl ScoreSummary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Self { mean, std: var.sqrt() }
    }
}

/// Feature dimension before reduction, after selection (mean over outer
/// folds) and after compression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionTrace {
    pub input: f64,
    pub after_fs: Option<f64>,
    pub after_dc: Option<f64>,
}

impl DimensionTrace {
    /// `39.0`, `39.0 ->FS 18.4`, `39.0 ->DC 2.0` or `39.0 ->FS 18.4 ->DC 2.0`.
    pub fn display(&self) -> String {
        let mut s = format!("{:.1}", self.input);
        if let Some(v) = self.after_fs {
            s.push_str(&format!(" ->FS {v:.1}"));
        }
        if let Some(v) = self.after_dc {
            s.push_str(&format!(" ->DC {v:.1}"));
        }
        s
    }

    pub fn last(&self) -> f64 {
        self.after_dc.or(self.after_fs).unwrap_or(self.input)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSummary {
    pub fold: usize,
    pub train_score: f64,
    pub valid_score: f64,
    pub test_score: f64,
    pub best_trial: usize,
    pub failed_trials: usize,
    pub params: HyperParamVector,
    pub selected_features: Option<Vec<usize>>,
    pub dims_after_fs: usize,
    pub dims_after_dc: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub design: ModelVector,
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
    pub train: ScoreSummary,
    pub valid: ScoreSummary,
    pub test: ScoreSummary,
    /// The `k·k` inner validation scores of the best trials, fold-major.
    pub valid_scores: Vec<f64>,
    pub dimensions: DimensionTrace,
    pub folds: Vec<FoldSummary>,
    /// Trial history of each outer fold's search.
    #[serde(skip)]
    pub histories: Vec<Vec<TrialRecord>>,
}

pub fn summarize(m: &ModelVector, cfg: &EvalConfig, results: Vec<OuterFoldResult>) -> DesignReport {
    let train: Vec<f64> = results.iter().map(|r| r.outcome.train_score).collect();
    let test: Vec<f64> = results.iter().map(|r| r.outcome.eval_score).collect();
    let valid_scores: Vec<f64> = results.iter().flat_map(|r| r.search.best_fold_scores.clone()).collect();
    let mean_dims = |f: fn(&OuterFoldResult) -> usize| {
        results.iter().map(|r| f(r) as f64).sum::<f64>() / results.len() as f64
    };
    let dimensions = DimensionTrace {
        input: FEATURE_COUNT as f64,
        after_fs: (m.selection == Selection::Fs).then(|| mean_dims(|r| r.outcome.dims_after_fs)),
        after_dc: (m.compression == Compression::Dc).then(|| mean_dims(|r| r.outcome.dims_after_dc)),
    };
    let folds = results
        .iter()
        .map(|r| FoldSummary {
            fold: r.fold,
            train_score: r.outcome.train_score,
            valid_score: r.search.best_value,
            test_score: r.outcome.eval_score,
            best_trial: r.search.best_trial,
            failed_trials: r.search.failed_trials,
            params: r.search.best_params.clone(),
            selected_features: r.outcome.artifacts.reduction.selection.as_ref().map(|s| s.indices.clone()),
            dims_after_fs: r.outcome.dims_after_fs,
            dims_after_dc: r.outcome.dims_after_dc,
        })
        .collect();
    DesignReport {
        design: *m,
        k: cfg.k,
        budget: cfg.budget,
        seed: cfg.seed,
        train: ScoreSummary::of(&train),
        valid: ScoreSummary::of(&valid_scores),
        test: ScoreSummary::of(&test),
        valid_scores,
        dimensions,
        folds,
        histories: results.into_iter().map(|r| r.search.history).collect(),
    }
}

/// Nested cross-validation of one design.
pub fn evaluate_model_design(cache: &FeatureCache, m: &ModelVector, cfg: &EvalConfig) -> Result<DesignReport> {
    let folds = outer_folds(cache, cfg.k, cfg.seed)?;
    let results = (0..cfg.k)
        .into_par_iter()
        .map(|f| evaluate_outer_fold(cache, m, &folds, f, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(m, cfg, results))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignOutcome {
    pub design: ModelVector,
    pub report: Option<DesignReport>,
    pub error: Option<String>,
}

/// Evaluates each design; a failing design is recorded and the sweep goes on.
/// Output order follows `designs`.
pub fn sweep_designs(cache: &FeatureCache, designs: &[ModelVector], cfg: &EvalConfig) -> Vec<DesignOutcome> {
    designs
        .par_iter()
        .map(|m| match evaluate_model_design(cache, m, cfg) {
            Ok(r) => DesignOutcome {
                design: *m,
                report: Some(r),
                error: None,
            },
            Err(e) => {
                let e = Error::Design {
                    design: m.to_string(),
                    source: Box::new(e),
                };
                log::error!("{e}");
                DesignOutcome {
                    design: *m,
                    report: None,
                    error: Some(e.to_string()),
                }
            }
        })
        .collect()
}

/// Per-feature share of outer folds in which selection kept the feature,
/// for every successful design that uses selection.
pub fn selection_rates(outcomes: &[DesignOutcome]) -> Vec<(ModelVector, Vec<f64>)> {
    outcomes
        .iter()
        .filter_map(|o| o.report.as_ref())
        .filter(|r| r.design.selection == Selection::Fs)
        .map(|r| {
            let mut counts = vec![0usize; FEATURE_COUNT];
            for f in &r.folds {
                for &j in f.selected_features.iter().flatten() {
                    counts[j] += 1;
                }
            }
            let n = r.folds.len() as f64;
            (r.design, counts.iter().map(|&c| c as f64 / n).collect())
        })
        .collect()
}
