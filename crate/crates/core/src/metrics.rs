//! Confusion matrices and the macro-averaged F1 score.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes, both in `classes` order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<usize>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Per-class F1 with 0/0 treated as 0.
    pub fn f1_scores(&self) -> Vec<f64> {
        let c = self.classes.len();
        (0..c)
            .map(|k| {
                let tp = self.counts[k][k] as f64;
                let predicted: u64 = (0..c).map(|i| self.counts[i][k]).sum();
                let actual: u64 = self.counts[k].iter().sum();
                let precision = ratio(tp, predicted as f64);
                let recall = ratio(tp, actual as f64);
                ratio(2.0 * precision * recall, precision + recall)
            })
            .collect()
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn confusion(y_true: &[usize], y_pred: &[usize], classes: &[usize]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    let index = |label: usize| {
        classes
            .iter()
            .position(|&c| c == label)
            .ok_or_else(|| Error::InvalidArgument(format!("label {label} not in class list")))
    };
    let mut counts = vec![vec![0u64; classes.len()]; classes.len()];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        counts[index(t)?][index(p)?] += 1;
    }
    Ok(ConfusionMatrix {
        classes: classes.to_vec(),
        counts,
    })
}

/// Unweighted mean of per-class F1 over `classes`.
pub fn macro_f1(y_true: &[usize], y_pred: &[usize], classes: &[usize]) -> Result<f64> {
    if y_true.is_empty() {
        return Err(Error::Empty("label vector"));
    }
    if classes.is_empty() {
        return Err(Error::Empty("class list"));
    }
    let cm = confusion(y_true, y_pred, classes)?;
    let f1 = cm.f1_scores();
    Ok(f1.iter().sum::<f64>() / f1.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn diagonal_when_perfect() {
        let y = [0, 1, 2, 2, 1];
        let cm = confusion(&y, &y, &[0, 1, 2]).unwrap();
        assert_eq!(cm.counts, vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(macro_f1(&y, &y, &[0, 1, 2]).unwrap(), 1.0);
    }

    #[test]
    fn single_miss() {
        let cm = confusion(&[0], &[1], &[0, 1]).unwrap();
        assert_eq!(cm.counts, vec![vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn all_predicted_one_class() {
        let y_true: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let y_pred = vec![0; 30];
        let f = macro_f1(&y_true, &y_pred, &[0, 1, 2]).unwrap();
        assert!((f - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn row_sums_match_true_counts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let y_true: Vec<usize> = (0..100).map(|_| rng.random_range(0..3)).collect();
        let y_pred: Vec<usize> = (0..100).map(|_| rng.random_range(0..3)).collect();
        let cm = confusion(&y_true, &y_pred, &[0, 1, 2]).unwrap();
        for k in 0..3 {
            let expected = y_true.iter().filter(|&&t| t == k).count() as u64;
            assert_eq!(cm.counts[k].iter().sum::<u64>(), expected);
        }
        assert_eq!(cm.total(), 100);
    }

    #[test]
    fn errors() {
        assert!(macro_f1(&[], &[], &[0]).is_err());
        assert!(confusion(&[0, 1], &[0], &[0, 1]).is_err());
        assert!(confusion(&[0, 5], &[0, 1], &[0, 1]).is_err());
    }

    proptest! {
        #[test]
        fn bounded_and_permutation_invariant(
            pairs in proptest::collection::vec((0usize..3, 0usize..3), 1..60),
            perm_idx in 0usize..6
        ) {
            let perms = [[0,1,2],[0,2,1],[1,0,2],[1,2,0],[2,0,1],[2,1,0]];
            let perm = perms[perm_idx];
            let (t, p): (Vec<usize>, Vec<usize>) = pairs.iter().cloned().unzip();
            let f = macro_f1(&t, &p, &[0, 1, 2]).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            let tp: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
            let pp: Vec<usize> = p.iter().map(|&x| perm[x]).collect();
            let g = macro_f1(&tp, &pp, &[0, 1, 2]).unwrap();
            prop_assert!((f - g).abs() < 1e-12);
        }
    }
}
