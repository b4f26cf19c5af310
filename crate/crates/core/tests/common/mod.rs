//! Shared helpers for the integration tests: a brute-force texture oracle
//! working directly on pixel lists, plus small data generators.

#![allow(dead_code)]

use std::collections::BTreeMap;

use histotex::imageio::{GrayImage, QuantizedImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (row, col) steps: 0°, 45°, 90°, 135°.
pub fn offsets(d: isize) -> [(isize, isize); 4] {
    [(0, d), (-d, d), (d, 0), (d, d)]
}

fn pixel(q: &QuantizedImage, r: isize, c: isize) -> Option<usize> {
    if r < 0 || c < 0 || r >= q.height() as isize || c >= q.width() as isize {
        None
    } else {
        Some(q.get(r as usize, c as usize))
    }
}

/// All in-bounds (source, target) value pairs for one offset.
pub fn pairs(q: &QuantizedImage, dr: isize, dc: isize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..q.height() as isize {
        for c in 0..q.width() as isize {
            if let (Some(a), Some(b)) = (pixel(q, r, c), pixel(q, r + dr, c + dc)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Moments and histogram statistics of a sample, in feature order:
/// mean, contrast, variance, skewness, kurtosis, energy, entropy.
pub fn sample_stats(values: &[usize]) -> [f64; 7] {
    let n = values.len() as f64;
    let xs: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    let mean = xs.iter().sum::<f64>() / n;
    let contrast = xs.iter().map(|x| x * x).sum::<f64>() / n;
    let central = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / n;
    let variance = central(2);
    let (skewness, kurtosis) = if variance > 0.0 {
        (
            central(3) / variance.powf(1.5),
            central(4) / (variance * variance) - 3.0,
        )
    } else {
        (0.0, 0.0)
    };
    let mut hist: BTreeMap<usize, f64> = BTreeMap::new();
    for &v in values {
        *hist.entry(v).or_default() += 1.0;
    }
    let energy = hist.values().map(|c| (c / n) * (c / n)).sum();
    let entropy = -hist.values().map(|c| (c / n) * (c / n).log2()).sum::<f64>();
    [mean, contrast, variance, skewness, kurtosis, energy, entropy]
}

pub fn fos(q: &QuantizedImage) -> [f64; 7] {
    let values: Vec<usize> = (0..q.height())
        .flat_map(|r| (0..q.width()).map(move |c| (r, c)))
        .map(|(r, c)| q.get(r, c))
        .collect();
    sample_stats(&values)
}

fn average<const N: usize>(per_dir: &[[f64; N]]) -> [f64; N] {
    let mut acc = [0.0; N];
    for s in per_dir {
        for k in 0..N {
            acc[k] += s[k];
        }
    }
    acc.map(|v| v / per_dir.len() as f64)
}

pub fn glds(q: &QuantizedImage, d: usize) -> [f64; 7] {
    let per_dir: Vec<[f64; 7]> = offsets(d as isize)
        .iter()
        .map(|&(dr, dc)| {
            let diffs: Vec<usize> = pairs(q, dr, dc).iter().map(|&(a, b)| a.abs_diff(b)).collect();
            sample_stats(&diffs)
        })
        .collect();
    average(&per_dir)
}

/// contrast, correlation, joint energy, joint entropy, idm, inverse variance.
pub fn glcm(q: &QuantizedImage, d: usize) -> [f64; 6] {
    let per_dir: Vec<[f64; 6]> = offsets(d as isize)
        .iter()
        .map(|&(dr, dc)| {
            // both orientations of every pair
            let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            let ps = pairs(q, dr, dc);
            let total = 2.0 * ps.len() as f64;
            for &(a, b) in &ps {
                *joint.entry((a, b)).or_default() += 1.0 / total;
                *joint.entry((b, a)).or_default() += 1.0 / total;
            }
            let mu: f64 = joint.iter().map(|(&(i, _), p)| i as f64 * p).sum();
            let var: f64 = joint.iter().map(|(&(i, _), p)| (i as f64 - mu).powi(2) * p).sum();
            let mut s = [0.0; 6];
            let mut cov = 0.0;
            for (&(i, j), &p) in &joint {
                let (fi, fj) = (i as f64, j as f64);
                let d2 = (fi - fj) * (fi - fj);
                s[0] += d2 * p;
                cov += (fi - mu) * (fj - mu) * p;
                s[2] += p * p;
                s[3] -= p * p.log2();
                s[4] += p / (1.0 + d2);
                if i != j {
                    s[5] += p / d2;
                }
            }
            s[1] = if var == 0.0 { 1.0 } else { cov / var };
            s
        })
        .collect();
    average(&per_dir)
}

/// (level, length) of every maximal run along one step direction. A run
/// starts at a pixel whose predecessor is outside or has a different value.
pub fn runs(q: &QuantizedImage, dr: isize, dc: isize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..q.height() as isize {
        for c in 0..q.width() as isize {
            let g = pixel(q, r, c).unwrap();
            if pixel(q, r - dr, c - dc) == Some(g) {
                continue;
            }
            let mut len = 1;
            while pixel(q, r + len as isize * dr, c + len as isize * dc) == Some(g) {
                len += 1;
            }
            out.push((g, len));
        }
    }
    out
}

/// sre, lre, gln, rln, rp.
pub fn glrlm(q: &QuantizedImage) -> [f64; 5] {
    let pixels = (q.width() * q.height()) as f64;
    let per_dir: Vec<[f64; 5]> = offsets(1)
        .iter()
        .map(|&(dr, dc)| {
            let rs = runs(q, dr, dc);
            let n = rs.len() as f64;
            let sre = rs.iter().map(|&(_, l)| 1.0 / (l * l) as f64).sum::<f64>() / n;
            let lre = rs.iter().map(|&(_, l)| (l * l) as f64).sum::<f64>() / n;
            let mut by_level: BTreeMap<usize, f64> = BTreeMap::new();
            let mut by_length: BTreeMap<usize, f64> = BTreeMap::new();
            for &(g, l) in &rs {
                *by_level.entry(g).or_default() += 1.0;
                *by_length.entry(l).or_default() += 1.0;
            }
            let gln = by_level.values().map(|c| c * c).sum::<f64>() / n;
            let rln = by_length.values().map(|c| c * c).sum::<f64>() / n;
            [sre, lre, gln, rln, n / pixels]
        })
        .collect();
    average(&per_dir)
}

pub fn random_quantized(rng: &mut ChaCha8Rng, w: usize, h: usize, levels: usize) -> QuantizedImage {
    let data = (0..w * h).map(|_| rng.random_range(0..levels) as u8).collect();
    QuantizedImage::new(w, h, levels, data).unwrap()
}

pub fn random_gray(seed: u64, w: usize, h: usize) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::new(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn synth_cache(per_class: usize, size: usize, seed: u64) -> histotex::pipeline::FeatureCache {
    let cfg = histotex::synth::SynthConfig {
        per_class,
        width: size,
        height: size,
        seed,
        grating_period: size as f64 / 12.0,
        ..Default::default()
    };
    histotex::pipeline::FeatureCache::new(histotex::synth::generate_dataset(&cfg).unwrap())
}

/// Exact float equality through a lossless text form.
pub fn same_bits<T: serde::Serialize>(a: &T, b: &T) -> bool {
    serde_json::to_string(a).unwrap() == serde_json::to_string(b).unwrap()
}
