use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::QuantizedImage;

use super::glds::{check_distance, for_each_pair};
use super::Direction;

/// Symmetric, normalized co-occurrence matrices, one per direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoocMatrix {
    levels: usize,
    distance: usize,
    directions: Vec<Direction>,
    /// `directions.len()` blocks of `levels × levels` joint probabilities.
    entries: Vec<f64>,
}

impl CoocMatrix {
    pub fn build(q: &QuantizedImage, distance: usize) -> Result<Self> {
        check_distance(distance)?;
        let n = q.levels();
        let mut entries = Vec::with_capacity(4 * n * n);
        for dir in Direction::ALL {
            let (dr, dc) = dir.offset(distance);
            let mut counts = vec![0u64; n * n];
            let mut total = 0u64;
            for_each_pair(q, dr, dc, |a, b| {
                counts[a * n + b] += 1;
                counts[b * n + a] += 1;
                total += 2;
            });
            if total == 0 {
                return Err(Error::InsufficientData(format!(
                    "{}x{} image has no pixel pairs at distance {distance} along {dir:?}",
                    q.width(),
                    q.height()
                )));
            }
            let t = total as f64;
            entries.extend(counts.iter().map(|&c| c as f64 / t));
        }
        Ok(Self {
            levels: n,
            distance,
            directions: Direction::ALL.to_vec(),
            entries,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Joint probability table for the `k`-th direction, row-major.
    pub fn matrix(&self, k: usize) -> &[f64] {
        let nn = self.levels * self.levels;
        &self.entries[k * nn..(k + 1) * nn]
    }
}

/// GLCM statistics for a single direction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GlcmStats {
    pub contrast: f64,
    pub correlation: f64,
    pub joint_energy: f64,
    pub joint_entropy: f64,
    pub idm: f64,
    pub inverse_variance: f64,
}

impl GlcmStats {
    pub const NAMES: [&'static str; 6] = [
        "contrast",
        "correlation",
        "joint_energy",
        "joint_entropy",
        "idm",
        "inverse_variance",
    ];

    pub fn to_array(self) -> [f64; 6] {
        [
            self.contrast,
            self.correlation,
            self.joint_energy,
            self.joint_entropy,
            self.idm,
            self.inverse_variance,
        ]
    }
}

pub fn glcm_matrix_stats(p: &[f64], levels: usize) -> GlcmStats {
    let n = levels;
    let mut px = vec![0.0; n];
    let mut py = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let v = p[i * n + j];
            px[i] += v;
            py[j] += v;
        }
    }
    let mu_x: f64 = px.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
    let mu_y: f64 = py.iter().enumerate().map(|(j, v)| j as f64 * v).sum();
    let sd_x = px
        .iter()
        .enumerate()
        .map(|(i, v)| (i as f64 - mu_x).powi(2) * v)
        .sum::<f64>()
        .sqrt();
    let sd_y = py
        .iter()
        .enumerate()
        .map(|(j, v)| (j as f64 - mu_y).powi(2) * v)
        .sum::<f64>()
        .sqrt();

    let mut s = GlcmStats::default();
    let mut cov = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = p[i * n + j];
            if v == 0.0 {
                continue;
            }
            let d2 = (i as f64 - j as f64).powi(2);
            s.contrast += d2 * v;
            cov += (i as f64 - mu_x) * (j as f64 - mu_y) * v;
            s.joint_energy += v * v;
            s.joint_entropy -= v * v.log2();
            s.idm += v / (1.0 + d2);
            if i != j {
                s.inverse_variance += v / d2;
            }
        }
    }
    s.correlation = if sd_x * sd_y == 0.0 {
        1.0
    } else {
        cov / (sd_x * sd_y)
    };
    s
}

/// Per-direction GLCM statistics for the four standard offsets.
pub fn glcm_direction_stats(q: &QuantizedImage, distance: usize) -> Result<Vec<GlcmStats>> {
    let m = CoocMatrix::build(q, distance)?;
    Ok((0..m.directions.len())
        .map(|k| glcm_matrix_stats(m.matrix(k), m.levels))
        .collect())
}

/// GLCM statistics averaged over the four directions.
pub fn glcm_features(q: &QuantizedImage, distance: usize) -> Result<GlcmStats> {
    let per_dir = glcm_direction_stats(q, distance)?;
    let k = per_dir.len() as f64;
    let mut acc = [0.0; 6];
    for s in &per_dir {
        for (a, v) in acc.iter_mut().zip(s.to_array()) {
            *a += v;
        }
    }
    let a = acc.map(|v| v / k);
    Ok(GlcmStats {
        contrast: a[0],
        correlation: a[1],
        joint_energy: a[2],
        joint_entropy: a[3],
        idm: a[4],
        inverse_variance: a[5],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard(w: usize, h: usize) -> QuantizedImage {
        let data = (0..w * h).map(|i| ((i / w + i % w) % 2) as u8).collect();
        QuantizedImage::new(w, h, 4, data).unwrap()
    }

    #[test]
    fn constant_image_conventions() {
        let q = QuantizedImage::new(4, 4, 16, vec![5; 16]).unwrap();
        let s = glcm_features(&q, 1).unwrap();
        assert_eq!(
            s,
            GlcmStats {
                contrast: 0.0,
                correlation: 1.0,
                joint_energy: 1.0,
                joint_entropy: 0.0,
                idm: 1.0,
                inverse_variance: 0.0
            }
        );
    }

    #[test]
    fn checkerboard_contrast() {
        let per_dir = glcm_direction_stats(&checkerboard(6, 6), 1).unwrap();
        let c: Vec<f64> = per_dir.iter().map(|s| s.contrast).collect();
        assert_eq!(c, vec![1.0, 0.0, 1.0, 0.0]);
        let avg = glcm_features(&checkerboard(6, 6), 1).unwrap();
        assert!((avg.contrast - 0.5).abs() < 1e-12);
    }

    #[test]
    fn matrices_are_symmetric_and_normalized() {
        let data: Vec<u8> = (0..49u32).map(|i| ((i * 7 + i / 3) % 16) as u8).collect();
        let q = QuantizedImage::new(7, 7, 16, data).unwrap();
        let m = CoocMatrix::build(&q, 2).unwrap();
        for k in 0..4 {
            let p = m.matrix(k);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for i in 0..16 {
                for j in 0..16 {
                    assert!((p[i * 16 + j] - p[j * 16 + i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn torus_checkerboard_is_translation_invariant() {
        // an 8x8 checkerboard shifted by one whole period (2 px) on a torus
        // is identical; a one-pixel shift inverts colors and keeps contrast
        let base = checkerboard(8, 8);
        let shifted: Vec<u8> = (0..64)
            .map(|i| {
                let (r, c) = (i / 8, i % 8);
                base.get(r, (c + 1) % 8) as u8
            })
            .collect();
        let shifted = QuantizedImage::new(8, 8, 4, shifted).unwrap();
        let a = glcm_features(&base, 1).unwrap();
        let b = glcm_features(&shifted, 1).unwrap();
        assert!((a.contrast - b.contrast).abs() < 1e-12);
        assert!((a.idm - b.idm).abs() < 1e-12);
    }
}
