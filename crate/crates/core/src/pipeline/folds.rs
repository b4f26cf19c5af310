use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dimred::class_list;
use crate::error::{Error, Result};

/// SplitMix64 finaliser, used to derive independent stream seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

fn assign(labels: &[usize], k: usize, seed: u64, exact: bool) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("K must be at least 2, got {k}")));
    }
    if labels.len() < k {
        return Err(Error::InsufficientData(format!(
            "{} samples cannot fill {k} folds",
            labels.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for c in class_list(labels) {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        if exact && !members.len().is_multiple_of(k) {
            return Err(Error::InsufficientData(format!(
                "class {c} has {} samples, not divisible by K={k}",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Stratified K-fold partition of sample positions: each class is shuffled
/// with a seeded RNG and dealt round-robin. Every class count must be a
/// multiple of `k`, so all folds have identical class composition.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    assign(labels, k, seed, true)
}

/// Like [`stratified_kfold`] but tolerates class counts that are not
/// multiples of `k`: the deal continues across classes, so fold sizes and
/// per-class counts differ by at most one.
pub fn stratified_kfold_balanced(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    assign(labels, k, seed, false)
}

/// Positions not in `fold`, ascending.
pub fn complement(n: usize, fold: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &i in fold {
        mark[i] = true;
    }
    (0..n).filter(|&i| !mark[i]).collect()
}
