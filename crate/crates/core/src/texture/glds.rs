use crate::error::{Error, Result};
use crate::imageio::QuantizedImage;

use super::distribution::{dist_stats, DistStats, Distribution1D};
use super::Direction;

/// Counts of absolute level differences over all in-bounds pairs at the
/// given offset. Returns `None` when the offset leaves no pair in the image.
pub fn difference_counts(q: &QuantizedImage, dir: Direction, distance: usize) -> Option<Vec<u64>> {
    let (dr, dc) = dir.offset(distance);
    let mut counts = vec![0u64; q.levels()];
    let mut pairs = 0u64;
    for_each_pair(q, dr, dc, |a, b| {
        counts[a.abs_diff(b)] += 1;
        pairs += 1;
    });
    (pairs > 0).then_some(counts)
}

/// Visits every in-bounds pixel pair `(p, p + (dr, dc))`.
pub(crate) fn for_each_pair(
    q: &QuantizedImage,
    dr: isize,
    dc: isize,
    mut visit: impl FnMut(usize, usize),
) {
    let (h, w) = (q.height() as isize, q.width() as isize);
    let r_range = 0.max(-dr)..h.min(h - dr);
    let c_range = 0.max(-dc)..w.min(w - dc);
    for r in r_range {
        for c in c_range.clone() {
            let a = q.get(r as usize, c as usize);
            let b = q.get((r + dr) as usize, (c + dc) as usize);
            visit(a, b);
        }
    }
}

pub(crate) fn check_distance(distance: usize) -> Result<()> {
    if (1..=4).contains(&distance) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "pixel distance must be in 1..=4, got {distance}"
        )))
    }
}

/// Per-direction difference statistics for the four standard offsets.
pub fn glds_direction_stats(q: &QuantizedImage, distance: usize) -> Result<Vec<DistStats>> {
    check_distance(distance)?;
    Direction::ALL
        .iter()
        .map(|&dir| {
            let counts = difference_counts(q, dir, distance).ok_or_else(|| {
                Error::InsufficientData(format!(
                    "{}x{} image has no pixel pairs at distance {distance} along {dir:?}",
                    q.width(),
                    q.height()
                ))
            })?;
            Ok(dist_stats(&Distribution1D::from_counts(&counts)?))
        })
        .collect()
}

/// Gray level difference statistics, averaged over the four directions.
pub fn glds_features(q: &QuantizedImage, distance: usize) -> Result<DistStats> {
    Ok(DistStats::average(&glds_direction_stats(q, distance)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard(n: usize) -> QuantizedImage {
        let data = (0..n * n).map(|i| ((i / n + i % n) % 2) as u8).collect();
        QuantizedImage::new(n, n, 4, data).unwrap()
    }

    #[test]
    fn constant_image() {
        let q = QuantizedImage::new(5, 5, 16, vec![7; 25]).unwrap();
        let s = glds_features(&q, 1).unwrap();
        assert_eq!(s.mean, 0.0);
        assert_eq!(s.contrast, 0.0);
        assert_eq!(s.entropy, 0.0);
        assert_eq!(s.energy, 1.0);
    }

    #[test]
    fn checkerboard_directions() {
        let per_dir = glds_direction_stats(&checkerboard(6), 1).unwrap();
        let means: Vec<f64> = per_dir.iter().map(|s| s.mean).collect();
        // 0° and 90° always cross colors, both diagonals stay on one color
        assert_eq!(means, vec![1.0, 0.0, 1.0, 0.0]);
        let avg = glds_features(&checkerboard(6), 1).unwrap();
        assert!((avg.mean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_small_image_errors() {
        let q = QuantizedImage::new(2, 2, 4, vec![0, 1, 2, 3]).unwrap();
        assert!(glds_features(&q, 2).is_err());
        assert!(glds_features(&q, 1).is_ok());
        assert!(glds_features(&q, 0).is_err());
        assert!(glds_features(&q, 5).is_err());
    }
}
