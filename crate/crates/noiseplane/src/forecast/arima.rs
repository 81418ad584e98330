//! ARIMA(p, d, q) by Hannan-Rissanen two-stage least squares, with grid
//! order selection on AICc computed from the conditional sum of squares.
//!
//! The differenced series is modeled as
//! `w_t = c + sum phi_i w_{t-i} + sum theta_j e_{t-j} + e_t`.
//! A constant is included only for `d = 0`, so `ARIMA(0,1,0)` reduces
//! exactly to the last-value benchmark.

use super::linalg::solve_least_squares;
use super::ForecastError;

/// Upper order bounds accepted by `fit`.
pub const MAX_AR: usize = 5;
pub const MAX_MA: usize = 5;
pub const MAX_DIFF: usize = 2;

/// A fitted ARIMA model with everything needed to forecast.
#[derive(Debug, Clone)]
pub struct ArimaModel {
    p: usize,
    d: usize,
    q: usize,
    ar: Vec<f64>,
    ma: Vec<f64>,
    intercept: f64,
    /// Differenced training series.
    w: Vec<f64>,
    /// Conditional residuals over the differenced series.
    residuals: Vec<f64>,
    /// `tails[j]` is the last value of the `j`-times-differenced series,
    /// used to integrate forecasts back to the original scale.
    tails: Vec<f64>,
    css: f64,
    n_eff: usize,
}

impl ArimaModel {
    /// Fits the given order on `values` (original, undifferenced scale).
    pub fn fit(values: &[f64], p: usize, d: usize, q: usize) -> Result<Self, ForecastError> {
        if p > MAX_AR || q > MAX_MA || d > MAX_DIFF {
            return Err(ForecastError::InvalidSpec(format!(
                "arima order ({p},{d},{q}) outside p,q <= 5, d <= 2"
            )));
        }
        let needed = p + d + q + 2;
        if values.len() < needed {
            return Err(ForecastError::InsufficientData {
                needed,
                got: values.len(),
            });
        }

        let mut tails = Vec::with_capacity(d);
        let mut w = values.to_vec();
        for _ in 0..d {
            tails.push(*w.last().expect("nonempty while differencing"));
            w = w.windows(2).map(|pair| pair[1] - pair[0]).collect();
        }
        let n_w = w.len();
        let with_intercept = d == 0;

        let (ar, ma, intercept) = if p == 0 && q == 0 {
            let c = if with_intercept {
                w.iter().sum::<f64>() / n_w as f64
            } else {
                0.0
            };
            (Vec::new(), Vec::new(), c)
        } else if q == 0 {
            let (coeffs, c) = fit_ar(&w, p, with_intercept)?;
            (coeffs, Vec::new(), c)
        } else {
            hannan_rissanen(&w, p, q, with_intercept)?
        };

        // Conditional residual recursion; unavailable lags contribute zero.
        let mut residuals = vec![0.0f64; n_w];
        for t in 0..n_w {
            let mut predicted = intercept;
            for (i, &phi) in ar.iter().enumerate() {
                if t > i {
                    predicted += phi * w[t - 1 - i];
                }
            }
            for (j, &theta) in ma.iter().enumerate() {
                if t > j {
                    predicted += theta * residuals[t - 1 - j];
                }
            }
            residuals[t] = w[t] - predicted;
        }
        let css: f64 = residuals[p..].iter().map(|e| e * e).sum();
        let n_eff = n_w - p;

        Ok(Self {
            p,
            d,
            q,
            ar,
            ma,
            intercept,
            w,
            residuals,
            tails,
            css,
            n_eff,
        })
    }

    /// Grid order selection over `p, q in 0..=3` and `d in 0..=2`, keeping
    /// the fit with minimal AICc. Orders that cannot be fit are skipped.
    pub fn auto(values: &[f64]) -> Result<Self, ForecastError> {
        let mut best: Option<Self> = None;
        for d in 0..=2 {
            for p in 0..=3 {
                for q in 0..=3 {
                    let Ok(model) = Self::fit(values, p, d, q) else {
                        continue;
                    };
                    let better = match &best {
                        None => model.aicc().is_finite(),
                        Some(current) => model.aicc() < current.aicc(),
                    };
                    if better {
                        best = Some(model);
                    }
                }
            }
        }
        best.ok_or(ForecastError::InsufficientData {
            needed: 8,
            got: values.len(),
        })
    }

    pub fn order(&self) -> (usize, usize, usize) {
        (self.p, self.d, self.q)
    }

    pub fn ar_coefficients(&self) -> &[f64] {
        &self.ar
    }

    pub fn ma_coefficients(&self) -> &[f64] {
        &self.ma
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Corrected Akaike criterion from the conditional sum of squares.
    pub fn aicc(&self) -> f64 {
        let n = self.n_eff as f64;
        let k = (self.p + self.q + usize::from(self.d == 0) + 1) as f64;
        if n - k - 1.0 <= 0.0 {
            return f64::INFINITY;
        }
        let variance = (self.css / n).max(1e-300);
        n * variance.ln() + 2.0 * k + 2.0 * k * (k + 1.0) / (n - k - 1.0)
    }

    /// Recursive forecast on the differenced scale, integrated back `d`
    /// times. Future shocks are zero; in-sample residuals feed the MA part.
    pub fn forecast(&self, horizon: usize) -> Vec<f64> {
        let n_w = self.w.len();
        let mut w_ext = self.w.clone();
        let mut e_ext = self.residuals.clone();
        for _ in 0..horizon {
            let t = w_ext.len();
            let mut value = self.intercept;
            for (i, &phi) in self.ar.iter().enumerate() {
                if t > i {
                    value += phi * w_ext[t - 1 - i];
                }
            }
            for (j, &theta) in self.ma.iter().enumerate() {
                if t > j {
                    value += theta * e_ext[t - 1 - j];
                }
            }
            w_ext.push(value);
            e_ext.push(0.0);
        }
        let mut preds = w_ext[n_w..].to_vec();
        for j in (0..self.d).rev() {
            let mut running = self.tails[j];
            for value in preds.iter_mut() {
                running += *value;
                *value = running;
            }
        }
        preds
    }
}

/// Least-squares AR(p) on `w`, optionally with an intercept.
/// Returns (coefficients, intercept).
fn fit_ar(w: &[f64], p: usize, with_intercept: bool) -> Result<(Vec<f64>, f64), ForecastError> {
    let n = w.len();
    let k = p + usize::from(with_intercept);
    if n <= p || n - p < k + 1 {
        return Err(ForecastError::InsufficientData {
            needed: p + k + 1,
            got: n,
        });
    }
    let mut rows = Vec::with_capacity(n - p);
    let mut targets = Vec::with_capacity(n - p);
    for t in p..n {
        let mut row: Vec<f64> = (1..=p).map(|i| w[t - i]).collect();
        if with_intercept {
            row.push(1.0);
        }
        rows.push(row);
        targets.push(w[t]);
    }
    let beta = solve_least_squares(&rows, &targets, 0.0).ok_or(ForecastError::SingularFit)?;
    let intercept = if with_intercept { beta[p] } else { 0.0 };
    Ok((beta[..p].to_vec(), intercept))
}

/// Two-stage Hannan-Rissanen: a long autoregression proxies the shocks,
/// then `w_t` is regressed on its own lags and the lagged shock proxies.
fn hannan_rissanen(
    w: &[f64],
    p: usize,
    q: usize,
    with_intercept: bool,
) -> Result<(Vec<f64>, Vec<f64>, f64), ForecastError> {
    let n = w.len();
    let mut long_order = (n / 4).min(20).max(p + q);
    long_order = long_order.min(n.saturating_sub(p + q + 2));
    if long_order == 0 {
        return Err(ForecastError::InsufficientData {
            needed: p + q + 3,
            got: n,
        });
    }

    let (long_ar, long_c) = fit_ar(w, long_order, with_intercept)?;
    // Shock proxies, defined from long_order onward.
    let mut shocks = vec![0.0f64; n];
    for t in long_order..n {
        let mut predicted = long_c;
        for (i, &a) in long_ar.iter().enumerate() {
            predicted += a * w[t - 1 - i];
        }
        shocks[t] = w[t] - predicted;
    }

    let start = (long_order + q).max(p);
    let k = p + q + usize::from(with_intercept);
    if n <= start || n - start < k + 1 {
        return Err(ForecastError::InsufficientData {
            needed: start + k + 1,
            got: n,
        });
    }
    let mut rows = Vec::with_capacity(n - start);
    let mut targets = Vec::with_capacity(n - start);
    for t in start..n {
        let mut row: Vec<f64> = (1..=p).map(|i| w[t - i]).collect();
        row.extend((1..=q).map(|j| shocks[t - j]));
        if with_intercept {
            row.push(1.0);
        }
        rows.push(row);
        targets.push(w[t]);
    }
    let beta = solve_least_squares(&rows, &targets, 0.0).ok_or(ForecastError::SingularFit)?;
    let ar = beta[..p].to_vec();
    let ma = beta[p..p + q].to_vec();
    let intercept = if with_intercept { beta[p + q] } else { 0.0 };
    Ok((ar, ma, intercept))
}
