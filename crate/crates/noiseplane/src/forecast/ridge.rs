//! Autoregressive ridge regression: `y(t)` on its last `lags` values plus an
//! unpenalized intercept, multi-step forecasts by recursive substitution.

use super::linalg::solve_least_squares;
use super::ForecastError;

pub(crate) struct RidgeFit {
    /// Weight on `y(t-1-j)` at index `j`.
    weights: Vec<f64>,
    intercept: f64,
}

pub(crate) fn fit_ridge(
    values: &[f64],
    lags: usize,
    lambda: f64,
) -> Result<RidgeFit, ForecastError> {
    let n = values.len();
    if n < lags + 2 {
        return Err(ForecastError::InsufficientData {
            needed: lags + 2,
            got: n,
        });
    }

    let rows = n - lags;
    let mut x_rows: Vec<Vec<f64>> = Vec::with_capacity(rows);
    let mut y = Vec::with_capacity(rows);
    for t in lags..n {
        x_rows.push((1..=lags).map(|j| values[t - j]).collect());
        y.push(values[t]);
    }

    // Center features and target so the intercept stays unpenalized.
    let mut col_means = vec![0.0f64; lags];
    for row in &x_rows {
        for (m, v) in col_means.iter_mut().zip(row) {
            *m += v;
        }
    }
    col_means.iter_mut().for_each(|m| *m /= rows as f64);
    let y_mean = y.iter().sum::<f64>() / rows as f64;
    for row in x_rows.iter_mut() {
        for (v, m) in row.iter_mut().zip(&col_means) {
            *v -= m;
        }
    }
    let y_centered: Vec<f64> = y.iter().map(|v| v - y_mean).collect();

    let weights =
        solve_least_squares(&x_rows, &y_centered, lambda).ok_or(ForecastError::SingularFit)?;
    let intercept = y_mean
        - weights
            .iter()
            .zip(&col_means)
            .map(|(w, m)| w * m)
            .sum::<f64>();
    if !intercept.is_finite() {
        return Err(ForecastError::SingularFit);
    }
    Ok(RidgeFit { weights, intercept })
}

impl RidgeFit {
    /// Recursive multi-step forecast from the end of `history`.
    pub(crate) fn forecast(&self, history: &[f64], horizon: usize) -> Vec<f64> {
        let lags = self.weights.len();
        // recent[j] = value at t-1-j
        let mut recent: Vec<f64> = history.iter().rev().take(lags).copied().collect();
        let mut out = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let next = self.intercept
                + self
                    .weights
                    .iter()
                    .zip(&recent)
                    .map(|(w, v)| w * v)
                    .sum::<f64>();
            out.push(next);
            recent.rotate_right(1);
            recent[0] = next;
        }
        out
    }
}
