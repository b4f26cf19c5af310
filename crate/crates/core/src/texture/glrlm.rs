use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::QuantizedImage;

use super::Direction;

/// Run counts `r(g, l)` for one scan direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLengthMatrix {
    levels: usize,
    max_run: usize,
    pixels: usize,
    /// `levels × max_run`, column `l - 1` holds runs of length `l`.
    counts: Vec<u64>,
}

impl RunLengthMatrix {
    pub fn build(q: &QuantizedImage, dir: Direction) -> Self {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for line in scan_lines(q.width(), q.height(), dir) {
            let mut iter = line.into_iter().map(|(r, c)| q.get(r, c));
            let Some(mut current) = iter.next() else {
                continue;
            };
            let mut len = 1;
            for v in iter {
                if v == current {
                    len += 1;
                } else {
                    runs.push((current, len));
                    current = v;
                    len = 1;
                }
            }
            runs.push((current, len));
        }
        let max_run = runs.iter().map(|&(_, l)| l).max().unwrap_or(0);
        let mut counts = vec![0u64; q.levels() * max_run];
        for (g, l) in runs {
            counts[g * max_run + l - 1] += 1;
        }
        Self {
            levels: q.levels(),
            max_run,
            pixels: q.width() * q.height(),
            counts,
        }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn max_run(&self) -> usize {
        self.max_run
    }

    pub fn count(&self, level: usize, run_length: usize) -> u64 {
        self.counts[level * self.max_run + run_length - 1]
    }

    pub fn total_runs(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn stats(&self) -> GlrlmStats {
        let runs = self.total_runs() as f64;
        let mut s = GlrlmStats::default();
        let mut per_length = vec![0.0; self.max_run];
        for g in 0..self.levels {
            let mut per_level = 0.0;
            for l in 1..=self.max_run {
                let r = self.count(g, l) as f64;
                if r == 0.0 {
                    continue;
                }
                let l2 = (l * l) as f64;
                s.sre += r / l2;
                s.lre += r * l2;
                per_level += r;
                per_length[l - 1] += r;
            }
            s.gln += per_level * per_level;
        }
        s.rln = per_length.iter().map(|v| v * v).sum();
        s.sre /= runs;
        s.lre /= runs;
        s.gln /= runs;
        s.rln /= runs;
        s.rp = runs / self.pixels as f64;
        s
    }
}

/// Pixel coordinates of every maximal line along `dir`, each in scan order.
pub fn scan_lines(width: usize, height: usize, dir: Direction) -> Vec<Vec<(usize, usize)>> {
    let (w, h) = (width as isize, height as isize);
    let (dr, dc) = dir.offset(1);
    // a line starts at any pixel whose predecessor is out of bounds
    let mut lines = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let (pr, pc) = (r - dr, c - dc);
            if pr >= 0 && pr < h && pc >= 0 && pc < w {
                continue;
            }
            let mut line = Vec::new();
            let (mut rr, mut cc) = (r, c);
            while rr >= 0 && rr < h && cc >= 0 && cc < w {
                line.push((rr as usize, cc as usize));
                rr += dr;
                cc += dc;
            }
            lines.push(line);
        }
    }
    lines
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GlrlmStats {
    pub sre: f64,
    pub lre: f64,
    pub gln: f64,
    pub rln: f64,
    pub rp: f64,
}

impl GlrlmStats {
    pub const NAMES: [&'static str; 5] = ["sre", "lre", "gln", "rln", "rp"];

    pub fn to_array(self) -> [f64; 5] {
        [self.sre, self.lre, self.gln, self.rln, self.rp]
    }
}

pub fn glrlm_direction_stats(q: &QuantizedImage, dir: Direction) -> GlrlmStats {
    RunLengthMatrix::build(q, dir).stats()
}

/// Run-length statistics averaged over the four directions.
pub fn glrlm_features(q: &QuantizedImage) -> Result<GlrlmStats> {
    if q.data().is_empty() {
        return Err(Error::Empty("image"));
    }
    let mut acc = [0.0; 5];
    for dir in Direction::ALL {
        for (a, v) in acc.iter_mut().zip(glrlm_direction_stats(q, dir).to_array()) {
            *a += v;
        }
    }
    let a = acc.map(|v| v / Direction::ALL.len() as f64);
    Ok(GlrlmStats {
        sre: a[0],
        lre: a[1],
        gln: a[2],
        rln: a[3],
        rp: a[4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_4x4_horizontal() {
        let q = QuantizedImage::new(4, 4, 4, vec![2; 16]).unwrap();
        let m = RunLengthMatrix::build(&q, Direction::Deg0);
        assert_eq!(m.total_runs(), 4);
        assert_eq!(m.count(2, 4), 4);
        let s = m.stats();
        assert!((s.sre - 1.0 / 16.0).abs() < 1e-12);
        assert!((s.lre - 16.0).abs() < 1e-12);
        assert!((s.gln - 4.0).abs() < 1e-12);
        assert!((s.rln - 4.0).abs() < 1e-12);
        assert!((s.rp - 0.25).abs() < 1e-12);
    }

    #[test]
    fn checkerboard_horizontal_is_maximally_fine() {
        let data = (0..36).map(|i| ((i / 6 + i % 6) % 2) as u8).collect();
        let q = QuantizedImage::new(6, 6, 4, data).unwrap();
        let s = glrlm_direction_stats(&q, Direction::Deg0);
        assert_eq!((s.sre, s.lre, s.rp), (1.0, 1.0, 1.0));
    }

    #[test]
    fn scan_lines_cover_every_pixel_once() {
        for dir in Direction::ALL {
            let lines = scan_lines(5, 3, dir);
            let mut seen = [0; 15];
            for line in &lines {
                for &(r, c) in line {
                    seen[r * 5 + c] += 1;
                }
            }
            assert!(seen.iter().all(|&n| n == 1), "{dir:?}");
        }
        assert_eq!(scan_lines(5, 3, Direction::Deg0).len(), 3);
        assert_eq!(scan_lines(5, 3, Direction::Deg90).len(), 5);
        assert_eq!(scan_lines(5, 3, Direction::Deg45).len(), 7);
        assert_eq!(scan_lines(5, 3, Direction::Deg135).len(), 7);
    }

    #[test]
    fn run_count_matches_pixels_for_single_row() {
        let q = QuantizedImage::new(5, 1, 4, vec![0, 0, 1, 1, 1]).unwrap();
        let m = RunLengthMatrix::build(&q, Direction::Deg0);
        assert_eq!(m.count(0, 2), 1);
        assert_eq!(m.count(1, 3), 1);
        assert_eq!(m.max_run(), 3);
    }
}
