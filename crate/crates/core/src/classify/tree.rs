//! Greedy CART decision tree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{check_training_input, class_list};
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// Gains closer than this are treated as equal; the earlier candidate wins.
const GAIN_TIE: f64 = 1e-12;
pub const MAX_DEPTH_RANGE: (usize, usize) = (1, 5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    Gini,
    Entropy,
    LogLoss,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Gini, Criterion::Entropy, Criterion::LogLoss];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Gini => "gini",
            Criterion::Entropy => "entropy",
            Criterion::LogLoss => "log_loss",
        }
    }

    /// Impurity of a node with the given class counts. Entropy and log-loss
    /// are both Shannon entropy.
    pub fn impurity(self, counts: &[usize]) -> f64 {
        let n: usize = counts.iter().sum();
        if n == 0 {
            return 0.0;
        }
        let n = n as f64;
        match self {
            Criterion::Gini => 1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>(),
            Criterion::Entropy | Criterion::LogLoss => -counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / n;
                    p * p.log2()
                })
                .sum::<f64>(),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gini" => Ok(Criterion::Gini),
            "entropy" => Ok(Criterion::Entropy),
            "log_loss" | "logloss" => Ok(Criterion::LogLoss),
            _ => Err(Error::Parse(format!("unknown tree criterion '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        class: usize,
        /// Training samples per class, indexed like `DtModel::classes`.
        counts: Vec<usize>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes are stored in preorder; the root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtModel {
    pub criterion: Criterion,
    pub max_depth: usize,
    pub n_features: usize,
    pub classes: Vec<usize>,
    pub nodes: Vec<Node>,
}

impl DtModel {
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn predict_one(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

/// Best split of `idx`: `(feature, threshold)`, or `None` when every feature
/// is constant on the node.
pub fn best_split(
    f: &FeatureMatrix,
    y: &[usize],
    n_classes: usize,
    idx: &[usize],
    criterion: Criterion,
) -> Option<(usize, f64)> {
    let mut total = vec![0usize; n_classes];
    for &i in idx {
        total[y[i]] += 1;
    }
    let parent = criterion.impurity(&total);
    let n = idx.len() as f64;
    let mut best: Option<(usize, f64, f64)> = None;
    let mut order = idx.to_vec();
    for feature in 0..f.cols() {
        order.sort_by(|&a, &b| f.get(a, feature).total_cmp(&f.get(b, feature)).then(a.cmp(&b)));
        let mut left = vec![0usize; n_classes];
        for k in 0..order.len() - 1 {
            left[y[order[k]]] += 1;
            let lo = f.get(order[k], feature);
            let hi = f.get(order[k + 1], feature);
            if lo == hi {
                continue;
            }
            let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
            let nl = (k + 1) as f64;
            let gain = parent
                - nl / n * criterion.impurity(&left)
                - (n - nl) / n * criterion.impurity(&right);
            if best.is_none_or(|(_, _, g)| gain > g + GAIN_TIE) {
                best = Some((feature, midpoint(lo, hi), gain));
            }
        }
    }
    best.map(|(feat, thr, _)| (feat, thr))
}

/// Midpoint of two distinct adjacent values, pulled back to `lo` if rounding
/// would land on `hi`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = (lo + hi) / 2.0;
    if m >= hi {
        lo
    } else {
        m
    }
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best
}

struct Builder<'a> {
    f: &'a FeatureMatrix,
    y: Vec<usize>,
    n_classes: usize,
    criterion: Criterion,
    max_depth: usize,
    classes: &'a [usize],
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn grow(&mut self, idx: &[usize], depth: usize) -> usize {
        let mut counts = vec![0usize; self.n_classes];
        for &i in idx {
            counts[self.y[i]] += 1;
        }
        let at = self.nodes.len();
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let split = if pure || depth >= self.max_depth {
            None
        } else {
            best_split(self.f, &self.y, self.n_classes, idx, self.criterion)
        };
        let Some((feature, threshold)) = split else {
            self.nodes.push(Node::Leaf {
                class: self.classes[majority(&counts)],
                counts,
            });
            return at;
        };
        self.nodes.push(Node::Split {
            feature,
            threshold,
            left: 0,
            right: 0,
        });
        let (l, r): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.f.get(i, feature) <= threshold);
        let left = self.grow(&l, depth + 1);
        let right = self.grow(&r, depth + 1);
        self.nodes[at] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        at
    }
}

pub fn train_dt(
    f: &FeatureMatrix,
    labels: &[usize],
    criterion: Criterion,
    max_depth: usize,
) -> Result<DtModel> {
    if !(MAX_DEPTH_RANGE.0..=MAX_DEPTH_RANGE.1).contains(&max_depth) {
        return Err(Error::InvalidArgument(format!(
            "max_depth must be in {}..={}, got {max_depth}",
            MAX_DEPTH_RANGE.0, MAX_DEPTH_RANGE.1
        )));
    }
    check_training_input(f, labels)?;
    let classes = class_list(labels);
    let y: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("label present"))
        .collect();
    let mut b = Builder {
        f,
        y,
        n_classes: classes.len(),
        criterion,
        max_depth,
        classes: &classes,
        nodes: Vec::new(),
    };
    let all: Vec<usize> = (0..labels.len()).collect();
    b.grow(&all, 0);
    let nodes = b.nodes;
    Ok(DtModel {
        criterion,
        max_depth,
        n_features: f.cols(),
        classes,
        nodes,
    })
}

pub fn predict_dt(m: &DtModel, f: &FeatureMatrix) -> Result<Vec<usize>> {
    if f.cols() != m.n_features {
        return Err(Error::DimensionMismatch {
            expected: m.n_features,
            actual: f.cols(),
        });
    }
    Ok(f.iter_rows().map(|x| m.predict_one(x)).collect())
}
