//! SVM (linear / RBF) and CART classifiers behind one interface.

pub mod smo;
mod svm;
mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

pub(crate) use crate::dimred::class_list;
pub use svm::{predict_svm, train_pair, train_svm, BinaryMachine, Kernel, SvmModel, PARAM_RANGE};
pub use tree::{best_split, predict_dt, train_dt, Criterion, DtModel, Node, MAX_DEPTH_RANGE};

pub(crate) fn check_training_input(f: &FeatureMatrix, labels: &[usize]) -> Result<()> {
    if f.rows() == 0 {
        return Err(Error::Empty("training data"));
    }
    if f.rows() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: f.rows(),
            actual: labels.len(),
        });
    }
    if !f.all_finite() {
        return Err(Error::NonFinite("training features"));
    }
    Ok(())
}

/// Classifier choice together with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClassifierSpec {
    SvmLinear { c: f64 },
    SvmRbf { c: f64, gamma: f64 },
    Tree { criterion: Criterion, max_depth: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainedClassifier {
    Svm(SvmModel),
    Tree(DtModel),
}

impl ClassifierSpec {
    pub fn train(&self, f: &FeatureMatrix, labels: &[usize]) -> Result<TrainedClassifier> {
        Ok(match *self {
            ClassifierSpec::SvmLinear { c } => TrainedClassifier::Svm(train_svm(f, labels, Kernel::Linear, c)?),
            ClassifierSpec::SvmRbf { c, gamma } => {
                TrainedClassifier::Svm(train_svm(f, labels, Kernel::Rbf { gamma }, c)?)
            }
            ClassifierSpec::Tree {
                criterion,
                max_depth,
            } => TrainedClassifier::Tree(train_dt(f, labels, criterion, max_depth)?),
        })
    }
}

impl TrainedClassifier {
    pub fn predict(&self, f: &FeatureMatrix) -> Result<Vec<usize>> {
        match self {
            TrainedClassifier::Svm(m) => predict_svm(m, f),
            TrainedClassifier::Tree(m) => predict_dt(m, f),
        }
    }
}
