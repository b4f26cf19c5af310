use crate::imageio::QuantizedImage;

use super::distribution::{dist_stats, DistStats, Distribution1D};
use crate::error::Result;

/// Gray-level histogram normalized over `0..levels`.
pub fn gray_histogram(q: &QuantizedImage) -> Result<Distribution1D> {
    let mut counts = vec![0u64; q.levels()];
    for &v in q.data() {
        counts[usize::from(v)] += 1;
    }
    Distribution1D::from_counts(&counts)
}

/// First-order statistics of the gray-level histogram.
pub fn fos_features(q: &QuantizedImage) -> Result<DistStats> {
    Ok(dist_stats(&gray_histogram(q)?))
}
