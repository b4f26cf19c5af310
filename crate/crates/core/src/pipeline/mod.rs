//! Nested stratified cross-validation of model designs with per-fold
//! hyperparameter search.

mod cache;
mod dataset;
mod evaluate;
mod folds;
mod report;

pub use cache::FeatureCache;
pub use dataset::Dataset;
pub use evaluate::{
    dimensionality_reduction, evaluate_model_design, evaluate_outer_fold, fit_and_score, outer_folds,
    search_best_parameters, selection_rates, summarize, sweep_designs, DesignOutcome, DesignReport,
    DimensionTrace, EvalConfig, FitOutcome, FoldArtifacts, FoldSummary, OuterFoldResult, Reduction,
    ScoreSummary, SearchResult,
};
pub use folds::{complement, derive_seed, stratified_kfold, stratified_kfold_balanced};
pub use report::{write_selection_rates_csv, write_table3_csv, write_table3_json};
