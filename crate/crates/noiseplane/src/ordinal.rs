//! Bandt-Pompe ordinal patterns and permutation entropy.
//!
//! Each length-`d` window (with delay `tau`) is mapped to the permutation
//! that sorts its values ascending, ties broken by position. Patterns are
//! indexed by the Lehmer code of that permutation, giving a dense index in
//! `0..d!` with zero-count patterns retained.

use serde::Serialize;
use thiserror::Error;

use crate::ingest::{TimeSeries, Window};

/// Largest supported embedding dimension; `10!` pattern slots is the
/// practical ceiling for dense count vectors.
pub const MAX_DIMENSION: usize = 10;

#[derive(Debug, Error)]
pub enum OrdinalError {
    #[error("invalid ordinal config: {0}")]
    InvalidConfig(String),
    #[error("series too short: {n} points cannot host a single (d={d}, tau={tau}) window")]
    SeriesTooShort { n: usize, d: usize, tau: usize },
    #[error("admissibility violated: n = {n} < 5 * {d}! = {required} (override with allow_short)")]
    AdmissibilityViolated { n: usize, d: usize, required: usize },
}

/// Embedding dimension and delay for pattern extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdinalConfig {
    d: usize,
    tau: usize,
    require_admissible: bool,
}

impl OrdinalConfig {
    /// A config with dimension `d` (2..=10) and unit delay.
    pub fn new(d: usize) -> Result<Self, OrdinalError> {
        Self::with_delay(d, 1)
    }

    pub fn with_delay(d: usize, tau: usize) -> Result<Self, OrdinalError> {
        if !(2..=MAX_DIMENSION).contains(&d) {
            return Err(OrdinalError::InvalidConfig(format!(
                "dimension must be in 2..={MAX_DIMENSION}, got {d}"
            )));
        }
        if tau < 1 {
            return Err(OrdinalError::InvalidConfig(
                "delay must be at least 1".to_string(),
            ));
        }
        Ok(Self {
            d,
            tau,
            require_admissible: true,
        })
    }

    /// Suppresses the `n >= 5 * d!` admissibility check, so short synthetic
    /// series can still be symbolized.
    pub fn allow_short(mut self) -> Self {
        self.require_admissible = false;
        self
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn delay(&self) -> usize {
        self.tau
    }

    /// Number of pattern slots, `d!`.
    pub fn pattern_count(&self) -> usize {
        factorial(self.d)
    }
}

/// Default embedding dimension per training window, following the rule of
/// thumb of 5 for multi-year spans and 4 for the shorter windows.
pub fn default_dimension(window: Window) -> usize {
    match window {
        Window::ThreeYears | Window::Full => 5,
        Window::OneYear | Window::SixMonths => 4,
    }
}

pub(crate) fn factorial(d: usize) -> usize {
    (1..=d).product()
}

/// Relative frequencies of the `d!` ordinal patterns of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalDistribution {
    config: OrdinalConfig,
    counts: Vec<u64>,
    probabilities: Vec<f64>,
    total: u64,
}

#[derive(Serialize)]
struct DistributionExport<'a> {
    d: usize,
    tau: usize,
    counts: &'a [u64],
}

impl OrdinalDistribution {
    fn from_counts_unchecked(config: OrdinalConfig, counts: Vec<u64>) -> Self {
        let total: u64 = counts.iter().sum();
        let probabilities = counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect();
        Self {
            config,
            counts,
            probabilities,
            total,
        }
    }

    /// Builds a distribution from raw pattern counts in Lehmer order.
    pub fn from_counts(config: OrdinalConfig, counts: Vec<u64>) -> Result<Self, OrdinalError> {
        if counts.len() != config.pattern_count() {
            return Err(OrdinalError::InvalidConfig(format!(
                "expected {} count slots, got {}",
                config.pattern_count(),
                counts.len()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(OrdinalError::InvalidConfig(
                "counts must not all be zero".to_string(),
            ));
        }
        Ok(Self::from_counts_unchecked(config, counts))
    }

    pub fn config(&self) -> &OrdinalConfig {
        &self.config
    }

    pub fn dimension(&self) -> usize {
        self.config.d
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Number of windows tallied.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Shannon entropy `S[P] = -sum p_i ln p_i` over nonzero entries,
    /// in `[0, ln d!]`.
    pub fn shannon_entropy(&self) -> f64 {
        shannon_entropy(&self.probabilities)
    }

    /// Entropy normalized to `[0, 1]` by `ln d!`.
    pub fn normalized_entropy(&self) -> f64 {
        self.shannon_entropy() / (self.config.pattern_count() as f64).ln()
    }

    /// JSON export `{d, tau, counts}` with counts in Lehmer order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DistributionExport {
            d: self.config.d,
            tau: self.config.tau,
            counts: &self.counts,
        })
        .expect("distribution export never fails")
    }
}

pub(crate) fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Permutation entropy of a distribution; normalized divides by `ln d!`.
pub fn permutation_entropy(dist: &OrdinalDistribution, normalized: bool) -> f64 {
    if normalized {
        dist.normalized_entropy()
    } else {
        dist.shannon_entropy()
    }
}

/// Symbolizes a series into its ordinal-pattern distribution.
pub fn extract_patterns(
    series: &TimeSeries,
    config: &OrdinalConfig,
) -> Result<OrdinalDistribution, OrdinalError> {
    extract_patterns_from(series.values(), config)
}

/// Slice-level extraction; `values` must all be finite.
pub fn extract_patterns_from(
    values: &[f64],
    config: &OrdinalConfig,
) -> Result<OrdinalDistribution, OrdinalError> {
    let n = values.len();
    let d = config.d;
    let tau = config.tau;
    let span = (d - 1) * tau;
    if n < span + 1 {
        return Err(OrdinalError::SeriesTooShort { n, d, tau });
    }
    let required = 5 * config.pattern_count();
    if config.require_admissible && n < required {
        return Err(OrdinalError::AdmissibilityViolated { n, d, required });
    }

    let mut counts = vec![0u64; config.pattern_count()];
    let mut perm: Vec<usize> = vec![0; d];
    for start in 0..(n - span) {
        for (slot, p) in perm.iter_mut().enumerate() {
            *p = slot;
        }
        // Insertion sort of the window positions by (value, position); the
        // positional tiebreak makes tied values keep their original order.
        for i in 1..d {
            let mut j = i;
            while j > 0 {
                let a = perm[j - 1];
                let b = perm[j];
                let va = values[start + a * tau];
                let vb = values[start + b * tau];
                if va > vb || (va == vb && a > b) {
                    perm.swap(j - 1, j);
                    j -= 1;
                } else {
                    break;
                }
            }
        }
        counts[lehmer_index(&perm)] += 1;
    }
    Ok(OrdinalDistribution::from_counts_unchecked(*config, counts))
}

/// Lehmer code (factorial number system) of a permutation of `0..d`,
/// mapping it to a dense index in `0..d!`. The identity maps to 0.
pub fn lehmer_index(perm: &[usize]) -> usize {
    let d = perm.len();
    let mut index = 0;
    let mut radix = factorial(d.saturating_sub(1));
    for i in 0..d {
        let smaller_after = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        index += smaller_after * radix;
        if d - i >= 2 {
            radix /= d - i - 1;
        }
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use chrono::NaiveDate;

    fn series(values: Vec<f64>) -> TimeSeries {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let dates = (0..values.len() as u64)
            .map(|i| start + chrono::Days::new(i))
            .collect();
        TimeSeries::new("t", dates, values).unwrap()
    }

    #[test]
    fn lehmer_identity_is_zero() {
        assert_eq!(lehmer_index(&[0, 1, 2]), 0);
        assert_eq!(lehmer_index(&[0, 1, 2, 3, 4]), 0);
    }

    #[test]
    fn lehmer_is_a_bijection_for_d3() {
        let mut seen = vec![false; 6];
        for p in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            let idx = lehmer_index(&p);
            assert!(!seen[idx], "index {idx} assigned twice");
            seen[idx] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn monotone_series_is_all_identity() {
        let s = series((1..=100).map(f64::from).collect());
        let config = OrdinalConfig::new(3).unwrap();
        let dist = extract_patterns(&s, &config).unwrap();
        assert_eq!(dist.total(), 98);
        assert_eq!(dist.counts()[0], 98);
        assert_abs_diff_eq!(dist.probabilities()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hand_enumerated_five_window_example() {
        let s = series(vec![6.0, 9.0, 11.0, 12.0, 8.0, 13.0, 5.0]);
        let config = OrdinalConfig::new(3).unwrap().allow_short();
        let dist = extract_patterns(&s, &config).unwrap();
        assert_eq!(dist.total(), 5);
        // windows: (6,9,11)->012 (9,11,12)->012 (11,12,8)->201 (12,8,13)->102 (8,13,5)->201
        assert_abs_diff_eq!(dist.probabilities()[lehmer_index(&[0, 1, 2])], 0.4);
        assert_abs_diff_eq!(dist.probabilities()[lehmer_index(&[2, 0, 1])], 0.4);
        assert_abs_diff_eq!(dist.probabilities()[lehmer_index(&[1, 0, 2])], 0.2);
    }

    #[test]
    fn ties_break_by_position() {
        let s = series(vec![3.0, 3.0, 3.0, 3.0]);
        let config = OrdinalConfig::new(2).unwrap().allow_short();
        let dist = extract_patterns(&s, &config).unwrap();
        assert_eq!(dist.counts()[lehmer_index(&[0, 1])], 3);
        assert_eq!(dist.total(), 3);
    }

    #[test]
    fn entropy_of_degenerate_distribution_is_zero() {
        let s = series((1..=100).map(f64::from).collect());
        let config = OrdinalConfig::new(3).unwrap();
        let dist = extract_patterns(&s, &config).unwrap();
        assert_abs_diff_eq!(permutation_entropy(&dist, false), 0.0);
        assert_abs_diff_eq!(permutation_entropy(&dist, true), 0.0);
    }

    #[test]
    fn entropy_of_uniform_distribution_is_one() {
        let config = OrdinalConfig::new(3).unwrap();
        let dist = OrdinalDistribution::from_counts(config, vec![7; 6]).unwrap();
        assert_abs_diff_eq!(dist.normalized_entropy(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.shannon_entropy(), 6.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_of_two_fifths_distribution() {
        // {0.4, 0.4, 0.2} over six slots.
        let config = OrdinalConfig::new(3).unwrap();
        let dist = OrdinalDistribution::from_counts(config, vec![2, 2, 1, 0, 0, 0]).unwrap();
        assert_abs_diff_eq!(dist.shannon_entropy(), 1.0549, epsilon = 1e-3);
        assert_abs_diff_eq!(dist.normalized_entropy(), 0.5887, epsilon = 1e-3);
    }

    #[test]
    fn admissibility_is_enforced_and_suppressible() {
        let s = series((0..30).map(|i| (i as f64 * 0.7).sin()).collect());
        let strict = OrdinalConfig::new(4).unwrap();
        assert!(matches!(
            extract_patterns(&s, &strict),
            Err(OrdinalError::AdmissibilityViolated { .. })
        ));
        let relaxed = strict.allow_short();
        assert!(extract_patterns(&s, &relaxed).is_ok());
    }

    #[test]
    fn too_short_for_a_single_window() {
        let s = series(vec![1.0, 2.0]);
        let config = OrdinalConfig::with_delay(3, 2).unwrap().allow_short();
        assert!(matches!(
            extract_patterns(&s, &config),
            Err(OrdinalError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn json_export_shape() {
        let config = OrdinalConfig::new(2).unwrap();
        let dist = OrdinalDistribution::from_counts(config, vec![3, 1]).unwrap();
        assert_eq!(dist.to_json(), r#"{"d":2,"tau":1,"counts":[3,1]}"#);
    }

    #[test]
    fn default_dimensions_per_window() {
        assert_eq!(default_dimension(Window::ThreeYears), 5);
        assert_eq!(default_dimension(Window::Full), 5);
        assert_eq!(default_dimension(Window::OneYear), 4);
        assert_eq!(default_dimension(Window::SixMonths), 4);
    }
}
