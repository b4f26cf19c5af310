//! Centered Fourier power spectrum and its angular / radial distributions.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::GrayImage;

use super::distribution::{dist_stats, DistStats, Distribution1D};

/// Absorbs rounding when a polar coordinate lands exactly on a bin edge, so
/// bins behave as half-open `[a, a + step)`.
const EDGE_EPS: f64 = 1e-9;

/// Squared DFT magnitudes of the mean-subtracted image with the zero
/// frequency moved to `(height / 2, width / 2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpectrum {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl PowerSpectrum {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn center(&self) -> (usize, usize) {
        (self.height / 2, self.width / 2)
    }

    /// Frequency coordinates `(u, v)` of a cell: `u` grows rightwards,
    /// `v` grows upwards.
    pub fn frequency(&self, row: usize, col: usize) -> (f64, f64) {
        let (cr, cc) = self.center();
        (col as f64 - cc as f64, cr as f64 - row as f64)
    }

    pub fn total_power(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Iterates `(u, v, power)` over every cell except the center.
    fn off_center(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let center = self.center();
        (0..self.height).flat_map(move |r| {
            (0..self.width).filter_map(move |c| {
                if (r, c) == center {
                    None
                } else {
                    let (u, v) = self.frequency(r, c);
                    Some((u, v, self.get(r, c)))
                }
            })
        })
    }
}

pub fn power_spectrum(img: &GrayImage) -> Result<PowerSpectrum> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::InvalidArgument(format!(
            "power spectrum needs at least 2x2 pixels, got {w}x{h}"
        )));
    }
    let mean = img.data().iter().map(|&v| f64::from(v)).sum::<f64>() / (w * h) as f64;
    let mut buf: Vec<Complex<f64>> = img
        .data()
        .iter()
        .map(|&v| Complex::new(f64::from(v) - mean, 0.0))
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(w);
    for row in buf.chunks_exact_mut(w) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(h);
    let mut column = vec![Complex::new(0.0, 0.0); h];
    for c in 0..w {
        for r in 0..h {
            column[r] = buf[r * w + c];
        }
        col_fft.process(&mut column);
        for r in 0..h {
            buf[r * w + c] = column[r];
        }
    }

    let (sh, sw) = (h / 2, w / 2);
    let mut data = vec![0.0; w * h];
    for r in 0..h {
        for c in 0..w {
            let dst = ((r + sh) % h) * w + (c + sw) % w;
            data[dst] = buf[r * w + c].norm_sqr();
        }
    }
    Ok(PowerSpectrum {
        width: w,
        height: h,
        data,
    })
}

fn check_step(step: usize, what: &str) -> Result<()> {
    if (1..=4).contains(&step) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} step must be in 1..=4, got {step}"
        )))
    }
}

/// Power per angular bin over `[0°, 180°)`, bins of width `angle_step`
/// labelled by their center angle.
pub fn angular_distribution(ps: &PowerSpectrum, angle_step: usize) -> Result<Distribution1D> {
    check_step(angle_step, "angle")?;
    let step = angle_step as f64;
    let bins = 180usize.div_ceil(angle_step);
    let mut mass = vec![0.0; bins];
    for (u, v, p) in ps.off_center() {
        let mut angle = v.atan2(u).to_degrees();
        if angle < 0.0 {
            angle += 180.0;
        }
        if angle >= 180.0 {
            angle -= 180.0;
        }
        let b = ((angle / step + EDGE_EPS).floor() as usize) % bins;
        mass[b] += p;
    }
    let support = (0..bins).map(|b| (b as f64 + 0.5) * step).collect();
    Distribution1D::from_weights(support, &mass)
}

/// Power per annulus of width `radius_step` out to `floor(min(W, H) / 2)`,
/// labelled by the annulus mid-radius.
pub fn radial_distribution(ps: &PowerSpectrum, radius_step: usize) -> Result<Distribution1D> {
    check_step(radius_step, "radius")?;
    let step = radius_step as f64;
    let r_max = ps.width.min(ps.height) / 2;
    let bins = r_max.div_ceil(radius_step).max(1);
    let mut mass = vec![0.0; bins];
    for (u, v, p) in ps.off_center() {
        let radius = (u * u + v * v).sqrt();
        if radius >= r_max as f64 {
            continue;
        }
        let b = ((radius / step + EDGE_EPS).floor() as usize).min(bins - 1);
        mass[b] += p;
    }
    let support = (0..bins).map(|b| (b as f64 + 0.5) * step).collect();
    Distribution1D::from_weights(support, &mass)
}

pub fn adf_features_from_spectrum(ps: &PowerSpectrum, angle_step: usize) -> Result<DistStats> {
    Ok(dist_stats(&angular_distribution(ps, angle_step)?))
}

pub fn rdf_features_from_spectrum(ps: &PowerSpectrum, radius_step: usize) -> Result<DistStats> {
    Ok(dist_stats(&radial_distribution(ps, radius_step)?))
}

/// Angular distribution statistics of the power spectrum.
pub fn adf_features(img: &GrayImage, angle_step: usize) -> Result<DistStats> {
    adf_features_from_spectrum(&power_spectrum(img)?, angle_step)
}

/// Radial distribution statistics of the power spectrum.
pub fn rdf_features(img: &GrayImage, radius_step: usize) -> Result<DistStats> {
    rdf_features_from_spectrum(&power_spectrum(img)?, radius_step)
}
