//! Naive baselines: drift extrapolation and seasonal carry-forward.

use super::ForecastError;

/// Straight line through the first and last training points, extrapolated
/// `horizon` steps: `y(T+h) = y(T) + h * (y(T) - y(1)) / (T - 1)`.
pub(crate) fn naive_drift(values: &[f64], horizon: usize) -> Result<Vec<f64>, ForecastError> {
    let n = values.len();
    if n < 2 {
        return Err(ForecastError::InsufficientData {
            needed: 2,
            got: n,
        });
    }
    let last = values[n - 1];
    let slope = (last - values[0]) / (n - 1) as f64;
    Ok((1..=horizon).map(|h| last + h as f64 * slope).collect())
}

/// Carry-forward of the last `k` values: `y(T+h) = y(T - k + 1 + (h-1) mod k)`.
/// With `k = 1` this is the last-value benchmark.
pub(crate) fn naive_seasonal(
    values: &[f64],
    k: usize,
    horizon: usize,
) -> Result<Vec<f64>, ForecastError> {
    let n = values.len();
    if n < k.max(2) {
        return Err(ForecastError::InsufficientData {
            needed: k.max(2),
            got: n,
        });
    }
    Ok((1..=horizon)
        .map(|h| values[n - k + (h - 1) % k])
        .collect())
}
