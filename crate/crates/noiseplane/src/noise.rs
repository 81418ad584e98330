//! Colored-noise reference generators.
//!
//! Spectral synthesis: a complex Gaussian spectrum with amplitude shaped as
//! `f^(-alpha/2)`, Hermitian symmetry, zero DC, real Nyquist bin, inverse
//! transform, standardize. Realizes arbitrary non-integer exponents with the
//! exact asymptotic slope. A cumulative-sum Brownian generator provides an
//! independent constructive route to `alpha = 2`.

use chrono::{Days, NaiveDate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{num_complex::Complex, FftPlanner};

use crate::ingest::{standardize_values, TimeSeries};

/// Parameters of one noise realization. Output is deterministic given the
/// full triple.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseSpec {
    /// Spectral exponent of `S(f) ~ 1/f^alpha`; 0 = white, 1 = pink,
    /// 2 = Brownian.
    pub alpha: f64,
    /// Sample count, at least 8.
    pub length: usize,
    pub seed: u64,
}

/// A labeled reference exponent.
#[derive(Debug, Clone, Copy)]
pub struct NoiseRef {
    pub label: &'static str,
    pub alpha: f64,
}

/// The four references drawn on the complexity-entropy plane.
pub const CH_PLANE_REFERENCES: [NoiseRef; 4] = [
    NoiseRef { label: "white", alpha: 0.0 },
    NoiseRef { label: "pink", alpha: 1.0 },
    NoiseRef { label: "brownian", alpha: 2.0 },
    NoiseRef { label: "alpha-2.5", alpha: 2.5 },
];

/// The five references used for distance matrices.
pub const DISTANCE_REFERENCES: [NoiseRef; 5] = [
    NoiseRef { label: "white", alpha: 0.0 },
    NoiseRef { label: "pink", alpha: 1.0 },
    NoiseRef { label: "brownian", alpha: 2.0 },
    NoiseRef { label: "alpha-2.5", alpha: 2.5 },
    NoiseRef { label: "alpha-3", alpha: 3.0 },
];

fn synthetic_dates(n: usize) -> Vec<NaiveDate> {
    let epoch = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid epoch");
    (0..n as u64).map(|i| epoch + Days::new(i)).collect()
}

/// Generates a standardized colored-noise series by spectral synthesis.
pub fn generate(spec: &NoiseSpec) -> TimeSeries {
    assert!(spec.length >= 8, "noise length must be at least 8");
    assert!(
        spec.alpha.is_finite() && spec.alpha >= 0.0,
        "alpha must be finite and non-negative"
    );
    let n = spec.length;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = StandardNormal;

    let mut spectrum = vec![Complex::new(0.0, 0.0); n];
    let half = n / 2;
    for k in 1..=half {
        let f = k as f64 / n as f64;
        let amplitude = f.powf(-spec.alpha / 2.0);
        if k < n - k {
            let g1: f64 = normal.sample(&mut rng);
            let g2: f64 = normal.sample(&mut rng);
            let value = Complex::new(g1, g2) * (amplitude / std::f64::consts::SQRT_2);
            spectrum[k] = value;
            spectrum[n - k] = value.conj();
        } else {
            // Nyquist bin of an even-length grid stays real.
            let g: f64 = normal.sample(&mut rng);
            spectrum[k] = Complex::new(g * amplitude, 0.0);
        }
    }

    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut spectrum);

    let mut values: Vec<f64> = spectrum.iter().map(|c| c.re).collect();
    let ok = standardize_values(&mut values);
    assert!(ok, "spectral synthesis produced a constant series");

    TimeSeries::from_parts(
        format!("noise-a{}-s{}", spec.alpha, spec.seed),
        synthetic_dates(n),
        values,
    )
}

/// Brownian motion as the cumulative sum of i.i.d. standard Gaussian
/// increments, standardized.
pub fn brownian_by_integration(length: usize, seed: u64) -> TimeSeries {
    assert!(length >= 8, "noise length must be at least 8");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut values = Vec::with_capacity(length);
    let mut level = 0.0;
    for _ in 0..length {
        let step: f64 = normal.sample(&mut rng);
        level += step;
        values.push(level);
    }
    let ok = standardize_values(&mut values);
    assert!(ok, "integrated noise produced a constant series");
    TimeSeries::from_parts(
        format!("brownian-s{seed}"),
        synthetic_dates(length),
        values,
    )
}
