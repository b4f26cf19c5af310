use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spread below this fraction of the second raw moment is treated as zero
/// spread, so skewness and kurtosis of numerically point-like distributions
/// stay finite.
const DEGENERATE_SPREAD: f64 = 1e-18;

/// Discrete distribution over strictly increasing bin coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution1D {
    support: Vec<f64>,
    probs: Vec<f64>,
    all_zero: bool,
}

impl Distribution1D {
    /// Normalizes non-negative `weights` into probabilities. Zero total mass
    /// yields an all-zero distribution.
    pub fn from_weights(support: Vec<f64>, weights: &[f64]) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                actual: weights.len(),
            });
        }
        if support.is_empty() {
            return Err(Error::Empty("distribution support"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "distribution support must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument(
                "distribution weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return Ok(Self {
                probs: vec![0.0; support.len()],
                support,
                all_zero: true,
            });
        }
        Ok(Self {
            probs: weights.iter().map(|w| w / total).collect(),
            support,
            all_zero: false,
        })
    }

    /// Histogram counts over the integer support `0..counts.len()`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let support = (0..counts.len()).map(|i| i as f64).collect();
        let weights: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        Self::from_weights(support, &weights)
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn is_all_zero(&self) -> bool {
        self.all_zero
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

/// The seven moment/information statistics shared by FOS, GLDS, ADF and RDF.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DistStats {
    pub mean: f64,
    pub contrast: f64,
    pub variance: f64,
    pub skewness: f64,
    /// Excess kurtosis: a normal distribution scores 0.
    pub kurtosis: f64,
    pub energy: f64,
    /// Shannon entropy in bits.
    pub entropy: f64,
}

impl DistStats {
    pub const NAMES: [&'static str; 7] = [
        "mean", "contrast", "variance", "skewness", "kurtosis", "energy", "entropy",
    ];

    pub fn to_array(self) -> [f64; 7] {
        [
            self.mean,
            self.contrast,
            self.variance,
            self.skewness,
            self.kurtosis,
            self.energy,
            self.entropy,
        ]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        Self {
            mean: a[0],
            contrast: a[1],
            variance: a[2],
            skewness: a[3],
            kurtosis: a[4],
            energy: a[5],
            entropy: a[6],
        }
    }

    /// Element-wise mean over several statistic sets.
    pub fn average(items: &[DistStats]) -> DistStats {
        let n = items.len() as f64;
        let mut acc = [0.0; 7];
        for s in items {
            for (a, v) in acc.iter_mut().zip(s.to_array()) {
                *a += v;
            }
        }
        DistStats::from_array(acc.map(|a| a / n))
    }
}

pub fn dist_stats(d: &Distribution1D) -> DistStats {
    if d.all_zero {
        return DistStats::default();
    }
    let pairs = || d.support.iter().zip(&d.probs).map(|(&x, &p)| (x, p));
    let mean: f64 = pairs().map(|(x, p)| x * p).sum();
    let contrast: f64 = pairs().map(|(x, p)| x * x * p).sum();
    let variance: f64 = pairs().map(|(x, p)| (x - mean).powi(2) * p).sum();
    let (skewness, kurtosis) = if variance <= DEGENERATE_SPREAD * contrast.max(f64::MIN_POSITIVE) {
        (0.0, 0.0)
    } else {
        let sigma = variance.sqrt();
        let skew = pairs().map(|(x, p)| ((x - mean) / sigma).powi(3) * p).sum();
        let kurt: f64 = pairs().map(|(x, p)| ((x - mean) / sigma).powi(4) * p).sum();
        (skew, kurt - 3.0)
    };
    let energy = d.probs.iter().map(|p| p * p).sum();
    let entropy = -d
        .probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>();
    DistStats {
        mean,
        contrast,
        variance,
        skewness,
        kurtosis,
        energy,
        entropy,
    }
}
