//! One-vs-one soft-margin SVM with linear or RBF kernel.

use serde::{Deserialize, Serialize};

use super::smo::{self, KKT_TOLERANCE};
use super::{check_training_input, class_list};
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

pub const PARAM_RANGE: (f64, f64) = (1e-4, 1e4);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    Linear,
    Rbf { gamma: f64 },
}

impl Kernel {
    pub fn eval(&self, x: &[f64], z: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => x.iter().zip(z).map(|(a, b)| a * b).sum(),
            Kernel::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

/// Binary machine separating `positive` (y = +1) from `negative` (y = −1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMachine {
    pub positive: usize,
    pub negative: usize,
    pub support_vectors: Vec<Vec<f64>>,
    /// `αᵢ·yᵢ` for each support vector.
    pub coefficients: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl BinaryMachine {
    pub fn decision(&self, kernel: &Kernel, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, c)| c * kernel.eval(sv, x))
            .sum::<f64>()
            - self.rho
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: Kernel,
    pub c: f64,
    pub n_features: usize,
    pub classes: Vec<usize>,
    /// Machines for pairs `(classes[a], classes[b])`, `a < b`, in lexicographic order.
    pub machines: Vec<BinaryMachine>,
}

fn check_param(name: &str, v: f64) -> Result<()> {
    if !(PARAM_RANGE.0..=PARAM_RANGE.1).contains(&v) {
        return Err(Error::InvalidArgument(format!(
            "{name} must lie in [{}, {}], got {v}",
            PARAM_RANGE.0, PARAM_RANGE.1
        )));
    }
    Ok(())
}

pub fn train_svm(f: &FeatureMatrix, labels: &[usize], kernel: Kernel, c: f64) -> Result<SvmModel> {
    check_param("C", c)?;
    if let Kernel::Rbf { gamma } = kernel {
        check_param("gamma", gamma)?;
    }
    check_training_input(f, labels)?;
    let classes = class_list(labels);
    if classes.len() < 2 {
        return Err(Error::InsufficientData(
            "SVM training needs at least two classes".into(),
        ));
    }

    let mut machines = Vec::new();
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            machines.push(train_pair(f, labels, kernel, c, classes[a], classes[b], false).0);
        }
    }
    Ok(SvmModel {
        kernel,
        c,
        n_features: f.cols(),
        classes,
        machines,
    })
}

/// Trains the binary machine for one class pair. With `record_trace` the dual
/// objective after every SMO step is returned as well.
pub fn train_pair(
    f: &FeatureMatrix,
    labels: &[usize],
    kernel: Kernel,
    c: f64,
    positive: usize,
    negative: usize,
    record_trace: bool,
) -> (BinaryMachine, Vec<f64>) {
    let idx: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] == positive || labels[i] == negative)
        .collect();
    let y: Vec<f64> = idx
        .iter()
        .map(|&i| if labels[i] == positive { 1.0 } else { -1.0 })
        .collect();
    let n = idx.len();
    let mut gram = vec![0.0; n * n];
    for p in 0..n {
        for q in p..n {
            let k = kernel.eval(f.row(idx[p]), f.row(idx[q]));
            gram[p * n + q] = k;
            gram[q * n + p] = k;
        }
    }
    let sol = smo::solve(&gram, &y, c, KKT_TOLERANCE, record_trace);
    if !sol.converged {
        log::debug!(
            "SMO stopped at the iteration cap ({}) for pair ({positive}, {negative})",
            sol.iterations
        );
    }
    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (p, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(f.row(idx[p]).to_vec());
            coefficients.push(a * y[p]);
        }
    }
    (
        BinaryMachine {
            positive,
            negative,
            support_vectors,
            coefficients,
            rho: sol.rho,
            iterations: sol.iterations,
            converged: sol.converged,
        },
        sol.dual_trace,
    )
}

impl SvmModel {
    /// Pairwise votes for one sample, indexed like `classes`. A decision value
    /// of exactly zero counts for the lower class.
    pub fn votes(&self, x: &[f64]) -> Vec<usize> {
        let mut votes = vec![0; self.classes.len()];
        let mut m = 0;
        for a in 0..self.classes.len() {
            for b in a + 1..self.classes.len() {
                if self.machines[m].decision(&self.kernel, x) >= 0.0 {
                    votes[a] += 1;
                } else {
                    votes[b] += 1;
                }
                m += 1;
            }
        }
        votes
    }

    pub fn predict_one(&self, x: &[f64]) -> usize {
        let votes = self.votes(x);
        let mut best = 0;
        for (k, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = k;
            }
        }
        self.classes[best]
    }
}

pub fn predict_svm(m: &SvmModel, f: &FeatureMatrix) -> Result<Vec<usize>> {
    if f.cols() != m.n_features {
        return Err(Error::DimensionMismatch {
            expected: m.n_features,
            actual: f.cols(),
        });
    }
    Ok(f.iter_rows().map(|x| m.predict_one(x)).collect())
}
