//! Tree-structured Parzen estimator sampling, one dimension at a time.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use statrs::distribution::{ContinuousCDF, Normal as NormalDist};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

use super::space::{Domain, ParamValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpeConfig {
    /// Trials drawn uniformly before the density model takes over.
    pub n_startup: usize,
    /// Fraction of the history (by objective) treated as "good".
    pub gamma: f64,
    /// Candidates drawn from the good density per dimension.
    pub n_candidates: usize,
    /// Weight of the uniform prior component in each density.
    pub prior_weight: f64,
}

impl Default for TpeConfig {
    fn default() -> Self {
        Self {
            n_startup: 10,
            gamma: 0.25,
            n_candidates: 24,
            prior_weight: 1.0,
        }
    }
}

/// Bounds of a numeric domain in the space where densities are modelled:
/// log scale for log-flagged floats, half-unit padding for integers.
fn internal_bounds(domain: &Domain) -> (f64, f64) {
    match *domain {
        Domain::Int { lo, hi } => (lo as f64 - 0.5, hi as f64 + 0.5),
        Domain::Float { lo, hi, log: true } => (lo.ln(), hi.ln()),
        Domain::Float { lo, hi, log: false } => (lo, hi),
        Domain::Categorical(_) => unreachable!("categorical has no numeric bounds"),
    }
}

pub(crate) fn to_internal(domain: &Domain, v: &ParamValue) -> f64 {
    match (domain, v) {
        (Domain::Float { log: true, .. }, ParamValue::Float(x)) => x.ln(),
        (_, ParamValue::Float(x)) => *x,
        (_, ParamValue::Int(x)) => *x as f64,
        (_, ParamValue::Category(_)) => unreachable!("numeric domain"),
    }
}

pub(crate) fn from_internal(domain: &Domain, x: f64) -> ParamValue {
    match *domain {
        Domain::Int { lo, hi } => ParamValue::Int((x.round() as i64).clamp(lo, hi)),
        Domain::Float { lo, hi, log } => {
            let v = if log { x.exp() } else { x };
            ParamValue::Float(v.clamp(lo, hi))
        }
        Domain::Categorical(_) => unreachable!("numeric domain"),
    }
}

pub(crate) fn sample_uniform<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> ParamValue {
    match domain {
        Domain::Categorical(choices) => choices[rng.random_range(0..choices.len())].clone(),
        Domain::Int { lo, hi } => ParamValue::Int(rng.random_range(*lo..=*hi)),
        Domain::Float { .. } => {
            let (a, b) = internal_bounds(domain);
            from_internal(domain, rng.random_range(a..=b))
        }
    }
}

/// Mixture of Gaussians truncated to `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct Parzen {
    lo: f64,
    hi: f64,
    mus: Vec<f64>,
    sigmas: Vec<f64>,
    weights: Vec<f64>,
    norms: Vec<f64>,
}

impl Parzen {
    /// One component per observation plus a broad prior centred on the
    /// interval. Each bandwidth is the larger gap to its sorted neighbours,
    /// clipped to `[range / min(100, n + 1), range]`.
    pub fn fit(obs: &[f64], lo: f64, hi: f64, prior_weight: f64) -> Self {
        let range = hi - lo;
        let prior_mu = lo + range / 2.0;
        let mut pts: Vec<(f64, bool)> = obs.iter().map(|&m| (m, false)).collect();
        pts.push((prior_mu, true));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = pts.len();
        let min_sigma = range / (100.0f64).min(obs.len() as f64 + 1.0);
        let mut mus = Vec::with_capacity(n);
        let mut sigmas = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let (mu, is_prior) = pts[k];
            let sigma = if is_prior {
                range
            } else {
                let left = if k > 0 { mu - pts[k - 1].0 } else { 0.0 };
                let right = if k + 1 < n { pts[k + 1].0 - mu } else { 0.0 };
                left.max(right).clamp(min_sigma, range)
            };
            mus.push(mu);
            sigmas.push(sigma);
            weights.push(if is_prior { prior_weight } else { 1.0 });
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let norms = mus
            .iter()
            .zip(&sigmas)
            .map(|(&m, &s)| {
                let d = NormalDist::new(m, s).expect("positive sigma");
                (d.cdf(hi) - d.cdf(lo)).max(f64::MIN_POSITIVE)
            })
            .collect();
        Self {
            lo,
            hi,
            mus,
            sigmas,
            weights,
            norms,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut k = self.weights.len() - 1;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                k = i;
                break;
            }
        }
        let normal = Normal::new(self.mus[k], self.sigmas[k]).expect("positive sigma");
        for _ in 0..64 {
            let x = normal.sample(rng);
            if (self.lo..=self.hi).contains(&x) {
                return x;
            }
        }
        self.mus[k].clamp(self.lo, self.hi)
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let mut p = 0.0;
        for k in 0..self.mus.len() {
            let z = (x - self.mus[k]) / self.sigmas[k];
            let pdf = (-0.5 * z * z).exp() / (self.sigmas[k] * SQRT_2PI);
            p += self.weights[k] * pdf / self.norms[k];
        }
        p.max(f64::MIN_POSITIVE).ln()
    }
}

/// Smoothed category probabilities: observation counts plus `prior_weight`
/// pseudo-counts per category.
pub fn categorical_probs(obs: &[usize], n_choices: usize, prior_weight: f64) -> Vec<f64> {
    let mut counts = vec![prior_weight; n_choices];
    for &o in obs {
        counts[o] += 1.0;
    }
    let total: f64 = counts.iter().sum();
    counts.iter().map(|c| c / total).collect()
}

/// Draws one value for `domain` given the good and bad observations of that
/// dimension, picking the candidate with the largest good/bad density ratio.
pub(crate) fn suggest_dimension<R: Rng + ?Sized>(
    domain: &Domain,
    good: &[&ParamValue],
    bad: &[&ParamValue],
    cfg: &TpeConfig,
    rng: &mut R,
) -> ParamValue {
    match domain {
        Domain::Categorical(choices) => {
            let index = |v: &ParamValue| choices.iter().position(|c| c == v).expect("value in domain");
            let gi: Vec<usize> = good.iter().map(|v| index(v)).collect();
            let bi: Vec<usize> = bad.iter().map(|v| index(v)).collect();
            let l = categorical_probs(&gi, choices.len(), cfg.prior_weight);
            let g = categorical_probs(&bi, choices.len(), cfg.prior_weight);
            let mut best: Option<(usize, f64)> = None;
            for _ in 0..cfg.n_candidates {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut k = choices.len() - 1;
                for (i, p) in l.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        k = i;
                        break;
                    }
                }
                let score = l[k].ln() - g[k].ln();
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((k, score));
                }
            }
            choices[best.expect("at least one candidate").0].clone()
        }
        _ => {
            let (lo, hi) = internal_bounds(domain);
            let gx: Vec<f64> = good.iter().map(|v| to_internal(domain, v)).collect();
            let bx: Vec<f64> = bad.iter().map(|v| to_internal(domain, v)).collect();
            let l = Parzen::fit(&gx, lo, hi, cfg.prior_weight);
            let g = Parzen::fit(&bx, lo, hi, cfg.prior_weight);
            let mut best: Option<(f64, f64)> = None;
            for _ in 0..cfg.n_candidates {
                let x = l.sample(rng);
                let score = l.log_density(x) - g.log_density(x);
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((x, score));
                }
            }
            from_internal(domain, best.expect("at least one candidate").0)
        }
    }
}
