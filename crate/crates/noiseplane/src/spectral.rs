//! Power spectral density estimation and power-law exponent fitting.
//!
//! Welch's averaged periodogram: overlapping Hann-windowed segments, each
//! demeaned before tapering, one-sided output with the DC bin excluded and
//! Parseval-consistent scaling. The spectral exponent is the negative slope
//! of an ordinary least-squares fit of log power on log frequency over a
//! frequency band.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;
use thiserror::Error;

use crate::ingest::TimeSeries;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("series too short: {n} points for segment length {segment} (minimum 16)")]
    SeriesTooShort { n: usize, segment: usize },
    #[error("overlap {0} outside [0, 0.9]")]
    InvalidOverlap(f64),
    #[error("band [{lo}, {hi}] holds {points} usable frequencies, need at least 8")]
    BandTooNarrow { lo: f64, hi: f64, points: usize },
}

/// One-sided PSD estimate over normalized frequencies (cycles/sample).
#[derive(Debug, Clone)]
pub struct PsdEstimate {
    /// Strictly increasing frequencies `k/segment`, DC excluded.
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    pub segment_len: usize,
    pub overlap: f64,
    pub window: &'static str,
    pub segments_averaged: usize,
}

/// Least-squares power-law fit `S(f) ~ 1/f^alpha` over a frequency band.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawFit {
    /// Negative slope of log power against log frequency.
    pub alpha: f64,
    /// Log power extrapolated to unit frequency.
    pub intercept: f64,
    /// Coefficient of determination of the log-log regression.
    pub r2: f64,
    /// `(f_lo, f_hi)` actually used.
    pub band: (f64, f64),
}

impl PowerLawFit {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fit export never fails")
    }
}

/// Default Welch segment length for a series of `n` samples: 256, shrunk to
/// the largest power of two that fits short series.
pub fn default_segment(n: usize) -> usize {
    let mut segment = 256;
    while segment > n && segment > 16 {
        segment /= 2;
    }
    segment.max(16)
}

/// Default fit band: skips the lowest bins (leakage-dominated) and the top
/// of the grid.
pub fn default_band(segment: usize) -> (f64, f64) {
    (4.0 / segment as f64, 0.25)
}

fn hann_window(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (len - 1) as f64).cos()))
        .collect()
}

/// Welch PSD of a series with the given segment length and overlap fraction.
pub fn welch_psd(
    series: &TimeSeries,
    segment: usize,
    overlap: f64,
) -> Result<PsdEstimate, SpectralError> {
    welch_psd_values(series.values(), segment, overlap)
}

pub fn welch_psd_values(
    values: &[f64],
    segment: usize,
    overlap: f64,
) -> Result<PsdEstimate, SpectralError> {
    let n = values.len();
    if segment < 16 || n < segment {
        return Err(SpectralError::SeriesTooShort { n, segment });
    }
    if !(0.0..=0.9).contains(&overlap) {
        return Err(SpectralError::InvalidOverlap(overlap));
    }

    let window = hann_window(segment);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let step = ((segment as f64) * (1.0 - overlap)).floor().max(1.0) as usize;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(segment);

    let half = segment / 2;
    let mut accumulated = vec![0.0f64; half];
    let mut segments = 0usize;
    let mut buffer = vec![Complex::new(0.0, 0.0); segment];

    let mut start = 0;
    while start + segment <= n {
        let chunk = &values[start..start + segment];
        let mean = chunk.iter().sum::<f64>() / segment as f64;
        for (slot, (&v, &w)) in buffer.iter_mut().zip(chunk.iter().zip(&window)) {
            *slot = Complex::new((v - mean) * w, 0.0);
        }
        fft.process(&mut buffer);
        for k in 1..=half {
            let mag_sq = buffer[k].norm_sqr();
            // One-sided doubling; the Nyquist bin of an even segment is its
            // own mirror image.
            let doubled = if k != segment - k { 2.0 * mag_sq } else { mag_sq };
            accumulated[k - 1] += doubled / window_power;
        }
        segments += 1;
        start += step;
    }

    let freqs = (1..=half).map(|k| k as f64 / segment as f64).collect();
    let power = accumulated
        .into_iter()
        .map(|p| p / segments as f64)
        .collect();
    Ok(PsdEstimate {
        freqs,
        power,
        segment_len: segment,
        overlap,
        window: "hann",
        segments_averaged: segments,
    })
}

/// Ordinary least squares of log power on log frequency over `band`;
/// `alpha` is the negative slope. Non-positive power bins are skipped.
pub fn fit_power_law(psd: &PsdEstimate, band: (f64, f64)) -> Result<PowerLawFit, SpectralError> {
    let (lo, hi) = band;
    let points: Vec<(f64, f64)> = psd
        .freqs
        .iter()
        .zip(&psd.power)
        .filter(|(&f, &p)| f >= lo && f <= hi && p > 0.0)
        .map(|(&f, &p)| (f.ln(), p.ln()))
        .collect();
    if points.len() < 8 {
        return Err(SpectralError::BandTooNarrow {
            lo,
            hi,
            points: points.len(),
        });
    }

    let n = points.len() as f64;
    let sum_x: f64 = points.iter().map(|(x, _)| x).sum();
    let sum_y: f64 = points.iter().map(|(_, y)| y).sum();
    let mean_x = sum_x / n;
    let mean_y = sum_y / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = points
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(PowerLawFit {
        alpha: -slope,
        intercept,
        r2,
        band,
    })
}

/// Welch PSD with default segment/overlap plus a power-law fit over the
/// default band.
pub fn estimate_alpha(series: &TimeSeries) -> Result<PowerLawFit, SpectralError> {
    let segment = default_segment(series.len());
    let psd = welch_psd(series, segment, 0.5)?;
    fit_power_law(&psd, default_band(segment))
}
