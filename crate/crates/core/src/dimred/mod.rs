//! Dimensionality reduction: pairwise variance-ratio feature selection and
//! Fisher LDA compression.

mod lda;
mod selection;

pub use lda::{apply_lda, fit_lda, LdaModel, RIDGE};
pub use selection::{
    class_list, class_pairs, fs_score, rank_features, select_features, FeatureScore, PairRanking,
    SelectionResult, SEPARATION_SENTINEL,
};
