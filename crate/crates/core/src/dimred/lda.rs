//! Fisher linear discriminant analysis via the symmetric-definite
//! generalized eigenproblem `S_b w = λ S_w w`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

use super::selection::class_list;

/// Relative ridge added to the within-class scatter diagonal.
pub const RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub d_in: usize,
    pub d_out: usize,
    /// `d_in × d_out`, row-major; each column is a unit discriminant axis.
    pub projection: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub classes: Vec<usize>,
    pub class_means: Vec<Vec<f64>>,
}

impl LdaModel {
    pub fn axis(&self, k: usize) -> Vec<f64> {
        (0..self.d_in)
            .map(|i| self.projection[i * self.d_out + k])
            .collect()
    }
}

pub fn fit_lda(f: &FeatureMatrix, labels: &[usize], d_out: usize) -> Result<LdaModel> {
    if labels.len() != f.rows() {
        return Err(Error::DimensionMismatch {
            expected: f.rows(),
            actual: labels.len(),
        });
    }
    if !f.all_finite() {
        return Err(Error::NonFinite("LDA input"));
    }
    let classes = class_list(labels);
    let c = classes.len();
    if c < 2 {
        return Err(Error::InsufficientData("LDA needs at least two classes".into()));
    }
    if d_out == 0 || d_out > c - 1 {
        return Err(Error::InvalidArgument(format!(
            "LDA output dimension must be in 1..={} for {c} classes, got {d_out}",
            c - 1
        )));
    }
    if f.rows() < c + 1 {
        return Err(Error::InsufficientData(format!(
            "LDA needs at least {} samples for {c} classes, got {}",
            c + 1,
            f.rows()
        )));
    }
    let d = f.cols();
    if d_out > d {
        return Err(Error::InvalidArgument(format!(
            "LDA output dimension {d_out} exceeds input dimension {d}"
        )));
    }

    let n = f.rows() as f64;
    let mut overall = DVector::<f64>::zeros(d);
    for row in f.iter_rows() {
        overall += DVector::from_column_slice(row);
    }
    overall /= n;

    let mut sw = DMatrix::<f64>::zeros(d, d);
    let mut sb = DMatrix::<f64>::zeros(d, d);
    let mut class_means = Vec::with_capacity(c);
    for &class in &classes {
        let rows: Vec<&[f64]> = f
            .iter_rows()
            .zip(labels)
            .filter(|(_, &l)| l == class)
            .map(|(r, _)| r)
            .collect();
        let mut mean = DVector::<f64>::zeros(d);
        for r in &rows {
            mean += DVector::from_column_slice(r);
        }
        mean /= rows.len() as f64;
        for r in &rows {
            let diff = DVector::from_column_slice(r) - &mean;
            sw.ger(1.0, &diff, &diff, 1.0);
        }
        let between = &mean - &overall;
        sb.ger(rows.len() as f64, &between, &between, 1.0);
        class_means.push(mean.iter().copied().collect());
    }

    let trace = sw.trace();
    let ridge = if trace > 0.0 { RIDGE * trace / d as f64 } else { RIDGE };
    for i in 0..d {
        sw[(i, i)] += ridge;
    }

    let chol = sw
        .cholesky()
        .ok_or_else(|| Error::LinearAlgebra("within-class scatter is not positive definite".into()))?;
    let l = chol.l();
    // C = L⁻¹ S_b L⁻ᵀ is symmetric with the same spectrum as S_w⁻¹ S_b
    let half = l
        .solve_lower_triangular(&sb)
        .ok_or_else(|| Error::LinearAlgebra("singular Cholesky factor".into()))?;
    let reduced = l
        .solve_lower_triangular(&half.transpose())
        .ok_or_else(|| Error::LinearAlgebra("singular Cholesky factor".into()))?;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let eig = SymmetricEigen::new(reduced);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });

    let mut projection = vec![0.0; d * d_out];
    let mut eigenvalues = Vec::with_capacity(d_out);
    for (k, &idx) in order.iter().take(d_out).enumerate() {
        let v = eig.eigenvectors.column(idx).into_owned();
        let mut w = l
            .tr_solve_lower_triangular(&v)
            .ok_or_else(|| Error::LinearAlgebra("singular Cholesky factor".into()))?;
        let norm = w.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::LinearAlgebra("degenerate discriminant axis".into()));
        }
        w /= norm;
        let max_abs = w.amax();
        if let Some(first) = w.iter().find(|x| x.abs() > 1e-12 * max_abs) {
            if *first < 0.0 {
                w.neg_mut();
            }
        }
        for i in 0..d {
            projection[i * d_out + k] = w[i];
        }
        eigenvalues.push(eig.eigenvalues[idx]);
    }

    Ok(LdaModel {
        d_in: d,
        d_out,
        projection,
        eigenvalues,
        classes,
        class_means,
    })
}

pub fn apply_lda(f: &FeatureMatrix, m: &LdaModel) -> Result<FeatureMatrix> {
    if f.cols() != m.d_in {
        return Err(Error::DimensionMismatch {
            expected: m.d_in,
            actual: f.cols(),
        });
    }
    let mut out = FeatureMatrix::zeros(f.rows(), m.d_out);
    for r in 0..f.rows() {
        let row = f.row(r);
        for k in 0..m.d_out {
            let v = row
                .iter()
                .enumerate()
                .map(|(i, x)| x * m.projection[i * m.d_out + k])
                .sum();
            out.set(r, k, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn blobs(centers: &[Vec<f64>], per_class: usize, sd: f64, seed: u64) -> (FeatureMatrix, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, sd).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (k, c) in centers.iter().enumerate() {
            for _ in 0..per_class {
                rows.push(c.iter().map(|x| x + noise.sample(&mut rng)).collect::<Vec<_>>());
                labels.push(k);
            }
        }
        (FeatureMatrix::from_rows(&rows).unwrap(), labels)
    }

    #[test]
    fn output_dimension_bounded_by_classes() {
        let (f, y) = blobs(&[vec![0.0; 4], vec![1.0; 4], vec![2.0; 4]], 5, 0.3, 1);
        assert!(fit_lda(&f, &y, 3).is_err());
        assert!(fit_lda(&f, &y, 0).is_err());
        assert_eq!(fit_lda(&f, &y, 2).unwrap().d_out, 2);
    }

    #[test]
    fn too_few_samples() {
        let f = FeatureMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]]).unwrap();
        assert!(fit_lda(&f, &[0, 1, 2], 1).is_err());
    }

    #[test]
    fn two_class_axis_is_horizontal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..60 {
            let x = if i % 2 == 0 { -5.0 } else { 5.0 };
            rows.push(vec![x + 0.3 * noise.sample(&mut rng), noise.sample(&mut rng)]);
            labels.push(i % 2);
        }
        let f = FeatureMatrix::from_rows(&rows).unwrap();
        let m = fit_lda(&f, &labels, 1).unwrap();
        let axis = m.axis(0);
        let angle = axis[1].atan2(axis[0]).to_degrees();
        assert!(angle.abs() < 5.0, "angle {angle}");
        assert!(axis[0] > 0.0);
    }

    #[test]
    fn projected_centroids_distinct() {
        let (f, y) = blobs(
            &[vec![0.0, 0.0, 0.0, 1.0], vec![3.0, 0.0, 1.0, 0.0], vec![0.0, 3.0, -1.0, 0.0]],
            10,
            0.5,
            3,
        );
        let m = fit_lda(&f, &y, 2).unwrap();
        let p = apply_lda(&f, &m).unwrap();
        assert_eq!(p.cols(), 2);
        let centroid = |k: usize| -> Vec<f64> {
            let rows: Vec<usize> = (0..y.len()).filter(|&i| y[i] == k).collect();
            (0..2)
                .map(|c| rows.iter().map(|&i| p.get(i, c)).sum::<f64>() / rows.len() as f64)
                .collect()
        };
        let cs: Vec<Vec<f64>> = (0..3).map(centroid).collect();
        for a in 0..3 {
            for b in a + 1..3 {
                let dist = ((cs[a][0] - cs[b][0]).powi(2) + (cs[a][1] - cs[b][1]).powi(2)).sqrt();
                assert!(dist > 0.5, "{a}-{b}: {dist}");
            }
        }
    }

    #[test]
    fn axes_are_unit_with_positive_lead() {
        let (f, y) = blobs(&[vec![0.0; 5], vec![1.0; 5], vec![-1.0, 2.0, 0.0, 0.0, 1.0]], 8, 0.4, 5);
        let m = fit_lda(&f, &y, 2).unwrap();
        for k in 0..2 {
            let a = m.axis(k);
            let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(a.iter().find(|x| x.abs() > 1e-12).unwrap() > &0.0);
        }
        assert!(m.eigenvalues[0] >= m.eigenvalues[1]);
    }

    #[test]
    fn relabeling_leaves_projection_unchanged() {
        let (f, y) = blobs(&[vec![0.0; 3], vec![2.0, 0.0, 1.0], vec![0.0, 2.0, -1.0]], 9, 0.5, 8);
        let relabeled: Vec<usize> = y.iter().map(|&l| [7, 3, 5][l]).collect();
        let a = fit_lda(&f, &y, 2).unwrap();
        let b = fit_lda(&f, &relabeled, 2).unwrap();
        for (x, z) in a.projection.iter().zip(&b.projection) {
            assert!((x - z).abs() < 1e-9);
        }
    }

    #[test]
    fn linear_application() {
        let (f, y) = blobs(&[vec![0.0; 3], vec![1.0; 3], vec![2.0, 0.0, 1.0]], 6, 0.3, 9);
        let m = fit_lda(&f, &y, 2).unwrap();
        let zero = apply_lda(&FeatureMatrix::zeros(1, 3), &m).unwrap();
        assert_eq!(zero.row(0), &[0.0, 0.0]);
        let x = FeatureMatrix::from_rows(&[[0.3, -1.2, 2.0]]).unwrap();
        let x2 = FeatureMatrix::from_rows(&[[0.6, -2.4, 4.0]]).unwrap();
        let (y1, y2) = (apply_lda(&x, &m).unwrap(), apply_lda(&x2, &m).unwrap());
        for k in 0..2 {
            assert!((2.0 * y1.get(0, k) - y2.get(0, k)).abs() < 1e-12);
        }
        assert!(apply_lda(&FeatureMatrix::zeros(1, 4), &m).is_err());
    }

    #[test]
    fn handles_more_features_than_samples() {
        let (f, y) = blobs(&[vec![0.0; 39], vec![0.5; 39], vec![-0.5; 39]], 4, 0.2, 12);
        let m = fit_lda(&f, &y, 2).unwrap();
        assert!(m.projection.iter().all(|v| v.is_finite()));
    }
}
