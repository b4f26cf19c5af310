use histotex::stats::{benjamini_hochberg, kruskal_wallis, significance_report};
use histotex::FeatureMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Literal definition: min over j ≥ i of p(j)·m/j, clipped to 1.
fn naive_bh(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut sorted = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    p.iter()
        .map(|&pi| {
            let rank = sorted.iter().position(|&s| s == pi).unwrap();
            (rank..m)
                .map(|j| sorted[j] * m as f64 / (j + 1) as f64)
                .fold(f64::INFINITY, f64::min)
                .min(1.0)
        })
        .collect()
}

/// Ranks by counting smaller and equal values; df = 2 survival is exp(-H/2).
fn naive_kw3(groups: &[Vec<f64>; 3]) -> (f64, f64) {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let rank = |x: f64| {
        let less = all.iter().filter(|&&v| v < x).count() as f64;
        let equal = all.iter().filter(|&&v| v == x).count() as f64;
        less + (equal + 1.0) / 2.0
    };
    let mut h = 0.0;
    for g in groups {
        let mean_rank = g.iter().map(|&x| rank(x)).sum::<f64>() / g.len() as f64;
        h += g.len() as f64 * (mean_rank - (n + 1.0) / 2.0).powi(2);
    }
    h *= 12.0 / (n * (n + 1.0));
    let mut ties = 0.0;
    let mut seen: Vec<f64> = Vec::new();
    for &x in &all {
        if !seen.contains(&x) {
            seen.push(x);
            let t = all.iter().filter(|&&v| v == x).count() as f64;
            ties += t * t * t - t;
        }
    }
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return (0.0, 1.0);
    }
    let h = h / correction;
    (h, (-h / 2.0).exp())
}

proptest! {
    #[test]
    fn bh_matches_literal_definition(p in prop::collection::vec(0.0f64..=1.0, 1..40)) {
        let got = benjamini_hochberg(&p).unwrap();
        for (g, e) in got.iter().zip(naive_bh(&p)) {
            prop_assert!((g - e).abs() <= 1e-12, "{} vs {}", g, e);
        }
    }

    #[test]
    fn kw_matches_counting_ranks(
        a in prop::collection::vec(0u8..6, 1..12),
        b in prop::collection::vec(0u8..6, 1..12),
        c in prop::collection::vec(0u8..6, 1..12),
    ) {
        let groups = [a, b, c].map(|g| g.into_iter().map(f64::from).collect::<Vec<_>>());
        prop_assume!(groups.iter().map(Vec::len).sum::<usize>() >= 5);
        let got = kruskal_wallis(&groups).unwrap();
        let (h, p) = naive_kw3(&groups);
        prop_assert!((got.h - h).abs() <= 1e-9 * h.max(1.0));
        prop_assert!((got.p - p).abs() <= 1e-9);
    }
}

#[test]
fn kw_continuous_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let groups: [Vec<f64>; 3] = std::array::from_fn(|k| {
            (0..7 + k).map(|_| StandardNormal.sample(&mut rng)).collect()
        });
        let got = kruskal_wallis(&groups).unwrap();
        let (h, p) = naive_kw3(&groups);
        assert!((got.h - h).abs() < 1e-9 && (got.p - p).abs() < 1e-9);
    }
}

#[test]
fn report_flags_only_the_shifted_feature() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let labels: Vec<usize> = (0..60).map(|i| i / 20).collect();
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&l| {
            let mut row: Vec<f64> = (0..5).map(|_| StandardNormal.sample(&mut rng)).collect();
            row[3] += 3.0 * l as f64;
            row
        })
        .collect();
    let f = FeatureMatrix::from_rows(&rows).unwrap();
    let names = ["a", "b", "c", "d", "e"];
    let report = significance_report(&f, &labels, &names, 0.05).unwrap();
    assert!(report.rows[3].significant);
    assert_eq!(report.rows[3].feature, "d");
    assert_eq!(report.boxplots.len(), 5 * 3);
    for row in &report.rows {
        assert!(row.p_adj >= row.p_raw);
    }
}
