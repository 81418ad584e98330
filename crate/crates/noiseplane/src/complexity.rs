//! Statistical complexity on the complexity-entropy plane.
//!
//! Builds on the ordinal-pattern distribution: Jensen-Shannon divergence,
//! the intensive statistical complexity `C = Q_J * H` (divergence from the
//! uniform distribution, normalized by its maximum, times normalized
//! entropy), the plane's extremal boundary curves, and the permutation
//! Jensen-Shannon distance between two series.
//!
//! Natural logarithms throughout; normalized quantities are base-independent.

use thiserror::Error;

use crate::ingest::TimeSeries;
use crate::noise::{self, NoiseSpec};
use crate::ordinal::{extract_patterns_from, shannon_entropy, OrdinalConfig, OrdinalDistribution, OrdinalError};

#[derive(Debug, Error)]
pub enum ComplexityError {
    #[error("distributions live on different pattern spaces ({left} vs {right} slots)")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A point on the complexity-entropy plane: normalized permutation entropy
/// `h` and statistical complexity `c`, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChPoint {
    pub h: f64,
    pub c: f64,
}

/// Which extremal envelope a boundary curve traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Min,
    Max,
}

/// An extremal complexity curve sampled on an evenly spaced entropy grid.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub kind: CurveKind,
    /// `(h, c)` pairs with `h` non-decreasing from 0 to 1.
    pub points: Vec<(f64, f64)>,
}

impl BoundaryCurve {
    /// Linear interpolation of the curve at entropy `h` (clamped to [0, 1]).
    pub fn complexity_at(&self, h: f64) -> f64 {
        let h = h.clamp(0.0, 1.0);
        let last = self.points.len() - 1;
        let pos = h * last as f64;
        let lo = (pos.floor() as usize).min(last - 1);
        let frac = pos - lo as f64;
        let (_, c0) = self.points[lo];
        let (_, c1) = self.points[lo + 1];
        c0 + frac * (c1 - c0)
    }
}

/// Jensen-Shannon divergence `S[(P+Q)/2] - S[P]/2 - S[Q]/2` between two
/// ordinal distributions over the same pattern space. Lies in `[0, ln 2]`.
pub fn js_divergence(
    p: &OrdinalDistribution,
    q: &OrdinalDistribution,
) -> Result<f64, ComplexityError> {
    js_divergence_probs(p.probabilities(), q.probabilities())
}

/// Divergence of two raw probability vectors of equal length.
pub fn js_divergence_probs(p: &[f64], q: &[f64]) -> Result<f64, ComplexityError> {
    if p.len() != q.len() {
        return Err(ComplexityError::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mixture_entropy: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let m = (a + b) / 2.0;
            if m > 0.0 {
                -m * m.ln()
            } else {
                0.0
            }
        })
        .sum();
    let d = mixture_entropy - (shannon_entropy(p) + shannon_entropy(q)) / 2.0;
    Ok(d.max(0.0))
}

/// Permutation Jensen-Shannon distance `sqrt(D_JS / ln 2)`, a metric in
/// `[0, 1]` on the pattern-distribution space.
pub fn pjsd(p: &OrdinalDistribution, q: &OrdinalDistribution) -> Result<f64, ComplexityError> {
    pjsd_probs(p.probabilities(), q.probabilities())
}

pub fn pjsd_probs(p: &[f64], q: &[f64]) -> Result<f64, ComplexityError> {
    let d = js_divergence_probs(p, q)?;
    Ok((d / std::f64::consts::LN_2).sqrt().min(1.0))
}

/// Maximum attainable divergence from the uniform distribution over `n`
/// slots, reached by a degenerate distribution.
fn max_divergence_from_uniform(n: usize) -> f64 {
    let n = n as f64;
    -0.5 * (((n + 1.0) / n) * (n + 1.0).ln() - 2.0 * (2.0 * n).ln() + n.ln())
}

/// Complexity-entropy coordinates of a distribution: `h` is the normalized
/// entropy, `c = h * D_JS(P, uniform) / J_max`.
pub fn statistical_complexity(p: &OrdinalDistribution) -> ChPoint {
    statistical_complexity_probs(p.probabilities())
}

pub fn statistical_complexity_probs(p: &[f64]) -> ChPoint {
    let n = p.len();
    let h = shannon_entropy(p) / (n as f64).ln();
    let uniform = vec![1.0 / n as f64; n];
    let divergence =
        js_divergence_probs(p, &uniform).expect("uniform reference shares the slot count");
    let q_j = divergence / max_divergence_from_uniform(n);
    ChPoint { h, c: q_j * h }
}

/// Entropy helpers over distributions described as (multiplicity, value)
/// groups, so the extremal families never materialize all `d!` slots.
fn group_entropy(groups: &[(usize, f64)]) -> f64 {
    groups
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(m, v)| -(m as f64) * v * v.ln())
        .sum()
}

fn group_ch_point(n: usize, groups: &[(usize, f64)]) -> ChPoint {
    let u = 1.0 / n as f64;
    let s_p = group_entropy(groups);
    let mixture: Vec<(usize, f64)> = groups.iter().map(|&(m, v)| (m, (v + u) / 2.0)).collect();
    let d = (group_entropy(&mixture) - (s_p + (n as f64).ln()) / 2.0).max(0.0);
    let h = s_p / (n as f64).ln();
    ChPoint {
        h,
        c: h * d / max_divergence_from_uniform(n),
    }
}

/// Minimum-complexity family: one slot carries `p`, the rest share the
/// remainder equally. Entropy decreases from 1 to 0 as `p` goes `1/n -> 1`.
fn min_family(n: usize, p: f64) -> ChPoint {
    let rest = (1.0 - p) / (n - 1) as f64;
    group_ch_point(n, &[(1, p), (n - 1, rest)])
}

/// Maximum-complexity family `k`: `k` slots zero, one slot carries `p`, the
/// remainder shared equally. Entropy increases with `p` on `[0, 1/(n-k)]`.
fn max_family(n: usize, k: usize, p: f64) -> ChPoint {
    let rest = (1.0 - p) / (n - k - 1) as f64;
    group_ch_point(n, &[(1, p), (n - k - 1, rest), (k, 0.0)])
}

fn bisect(mut lo: f64, mut hi: f64, target_h: f64, increasing: bool, eval: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let h = eval(mid);
        let go_up = if increasing { h < target_h } else { h > target_h };
        if go_up {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact minimum complexity attainable at normalized entropy `h` for
/// dimension `d`.
pub fn min_complexity_at(d: usize, h: f64) -> f64 {
    let n = crate::ordinal::factorial(d);
    if h <= 0.0 || h >= 1.0 {
        return 0.0;
    }
    let p = bisect(1.0 / n as f64, 1.0, h, false, |p| min_family(n, p).h);
    min_family(n, p).c
}

/// Exact maximum complexity attainable at normalized entropy `h` for
/// dimension `d`, the upper envelope over the zeroed-slot families.
pub fn max_complexity_at(d: usize, h: f64) -> f64 {
    let n = crate::ordinal::factorial(d);
    if h <= 0.0 || h >= 1.0 {
        return 0.0;
    }
    let ln_n = (n as f64).ln();
    // Family k spans h in [ln(n-k-1), ln(n-k)] / ln n; locate the covering k.
    let x = (h * ln_n).exp();
    let mut k = (n as f64 - x).floor() as isize;
    k = k.clamp(0, n as isize - 2);
    let covers = |k: isize| {
        let lo = if n as isize - k - 1 <= 1 {
            0.0
        } else {
            ((n as isize - k - 1) as f64).ln() / ln_n
        };
        let hi = ((n as isize - k) as f64).ln() / ln_n;
        (lo, hi)
    };
    loop {
        let (lo, hi) = covers(k);
        if h < lo && k > 0 {
            k -= 1;
        } else if h > hi && k < n as isize - 2 {
            k += 1;
        } else {
            break;
        }
    }
    let k = k as usize;
    let p_max = 1.0 / (n - k) as f64;
    let p = bisect(0.0, p_max, h, true, |p| max_family(n, k, p).h);
    max_family(n, k, p).c
}

/// Samples both extremal curves on an evenly spaced entropy grid of
/// `resolution` points (at least 16). Both curves start at `(0, 0)` and
/// end at `(1, 0)`.
pub fn ch_boundaries(d: usize, resolution: usize) -> (BoundaryCurve, BoundaryCurve) {
    let resolution = resolution.max(16);
    let mut min_points = Vec::with_capacity(resolution);
    let mut max_points = Vec::with_capacity(resolution);
    for j in 0..resolution {
        let h = j as f64 / (resolution - 1) as f64;
        min_points.push((h, min_complexity_at(d, h)));
        max_points.push((h, max_complexity_at(d, h)));
    }
    (
        BoundaryCurve {
            kind: CurveKind::Min,
            points: min_points,
        },
        BoundaryCurve {
            kind: CurveKind::Max,
            points: max_points,
        },
    )
}

/// Whether a plane point lies between the extremal curves, with `slack`
/// tolerance on both sides.
pub fn within_boundaries(d: usize, point: ChPoint, slack: f64) -> bool {
    point.c >= min_complexity_at(d, point.h) - slack
        && point.c <= max_complexity_at(d, point.h) + slack
}

/// Mean permutation Jensen-Shannon distance between a series and colored
/// noise of exponent `alpha`, averaged over one noise realization per seed.
/// Each realization matches the series length.
pub fn mean_pjsd_to_noise(
    series: &TimeSeries,
    alpha: f64,
    config: &OrdinalConfig,
    seeds: &[u64],
) -> Result<f64, ComplexityError> {
    assert!(!seeds.is_empty(), "at least one noise seed is required");
    let p = extract_patterns_from(series.values(), config)?;
    let mut sum = 0.0;
    for &seed in seeds {
        let reference = noise::generate(&NoiseSpec {
            alpha,
            length: series.len(),
            seed,
        });
        let q = extract_patterns_from(reference.values(), config)?;
        sum += pjsd(&p, &q)?;
    }
    Ok(sum / seeds.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn js_divergence_of_identical_distributions_is_zero() {
        let p = [0.25, 0.5, 0.25];
        assert_eq!(js_divergence_probs(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn js_divergence_of_disjoint_supports_is_ln2() {
        let d = js_divergence_probs(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(d, std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn js_divergence_half_half_vs_point_mass() {
        // ln 2 - (3/4) ln 3 + (1/2) ln 2
        let expected = 1.5 * 2.0_f64.ln() - 0.75 * 3.0_f64.ln();
        let d = js_divergence_probs(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(d, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(d, 0.2158, epsilon = 1e-4);
    }

    #[test]
    fn js_divergence_dimension_mismatch() {
        assert!(matches!(
            js_divergence_probs(&[1.0], &[0.5, 0.5]),
            Err(ComplexityError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complexity_of_uniform_is_one_zero() {
        let p = vec![1.0 / 6.0; 6];
        let point = statistical_complexity_probs(&p);
        assert_abs_diff_eq!(point.h, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(point.c, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn complexity_of_degenerate_is_zero_zero() {
        let p = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let point = statistical_complexity_probs(&p);
        assert_abs_diff_eq!(point.h, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(point.c, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn complexity_of_two_slot_distribution_over_six() {
        let p = [0.5, 0.5, 0.0, 0.0, 0.0, 0.0];
        let point = statistical_complexity_probs(&p);
        assert_abs_diff_eq!(point.h, 2.0_f64.ln() / 6.0_f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(point.c, 0.271239, epsilon = 1e-6);
    }

    #[test]
    fn pjsd_identity_and_saturation() {
        let p = [0.2, 0.3, 0.5];
        assert_eq!(pjsd_probs(&p, &p).unwrap(), 0.0);
        // Disjoint supports saturate the distance at 1.
        assert_abs_diff_eq!(
            pjsd_probs(&[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pjsd_of_increasing_vs_decreasing_series_is_one() {
        let config = OrdinalConfig::new(2).unwrap().allow_short();
        let up: Vec<f64> = (0..50).map(f64::from).collect();
        let down: Vec<f64> = (0..50).rev().map(f64::from).collect();
        let p = extract_patterns_from(&up, &config).unwrap();
        let q = extract_patterns_from(&down, &config).unwrap();
        assert_abs_diff_eq!(pjsd(&p, &q).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn boundaries_share_endpoints_and_order() {
        let (min_curve, max_curve) = ch_boundaries(4, 64);
        for curve in [&min_curve, &max_curve] {
            let first = curve.points.first().unwrap();
            let last = curve.points.last().unwrap();
            assert_abs_diff_eq!(first.0, 0.0, epsilon = 1e-6);
            assert_abs_diff_eq!(first.1, 0.0, epsilon = 1e-6);
            assert_abs_diff_eq!(last.0, 1.0, epsilon = 1e-6);
            assert_abs_diff_eq!(last.1, 0.0, epsilon = 1e-6);
            assert!(curve.points.windows(2).all(|p| p[0].0 <= p[1].0));
        }
        for (lo, hi) in min_curve.points.iter().zip(&max_curve.points) {
            assert!(hi.1 >= lo.1 - 1e-12, "max curve dips below min at h={}", lo.0);
        }
    }

    #[test]
    fn interpolation_matches_grid_nodes() {
        let (min_curve, _) = ch_boundaries(3, 33);
        for &(h, c) in &min_curve.points {
            assert_abs_diff_eq!(min_curve.complexity_at(h), c, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_distributions_stay_in_the_unit_box() {
        // Dirichlet-ish draws via normalized exponentials of a simple LCG.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64).max(1e-12)
        };
        for _ in 0..200 {
            let mut p: Vec<f64> = (0..24).map(|_| -next().ln()).collect();
            let total: f64 = p.iter().sum();
            p.iter_mut().for_each(|v| *v /= total);
            let point = statistical_complexity_probs(&p);
            assert!((0.0..=1.0).contains(&point.h));
            assert!((0.0..=1.0).contains(&point.c));
            assert!(within_boundaries(4, point, 1e-9), "point ({}, {}) escaped", point.h, point.c);
        }
    }
}
