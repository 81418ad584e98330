//! Forecasting models behind a single contract: fit on a training window,
//! predict `horizon` steps ahead. All models are deterministic functions of
//! their inputs.

mod arima;
mod linalg;
mod naive;
mod ridge;
mod smoothing;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::TimeSeries;

pub use arima::ArimaModel;

#[derive(Debug, Error)]
pub enum ForecastError {
    #[error("insufficient training data: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("normal equations unsolvable; fall back to a naive model")]
    SingularFit,
    #[error("invalid forecaster spec: {0}")]
    InvalidSpec(String),
}

/// Which model to fit, with its parameters. `None` parameters are optimized
/// in-sample at fit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForecasterSpec {
    NaiveDrift,
    NaiveSeasonal { period: usize },
    Ses { alpha: Option<f64> },
    Holt { alpha: Option<f64>, beta: Option<f64> },
    Arima { p: usize, d: usize, q: usize },
    AutoArima,
    LaggedRidge { lags: usize, lambda: f64 },
}

impl ForecasterSpec {
    /// Last-value carry-forward, the universal fallback benchmark.
    pub fn last_value() -> Self {
        ForecasterSpec::NaiveSeasonal { period: 1 }
    }

    pub fn validate(&self) -> Result<(), ForecastError> {
        let fail = |msg: String| Err(ForecastError::InvalidSpec(msg));
        match self {
            ForecasterSpec::NaiveDrift | ForecasterSpec::AutoArima => Ok(()),
            ForecasterSpec::NaiveSeasonal { period } => {
                if *period < 1 {
                    return fail("seasonal period must be at least 1".into());
                }
                Ok(())
            }
            ForecasterSpec::Ses { alpha } => {
                if let Some(a) = alpha {
                    if !(0.0..=1.0).contains(a) {
                        return fail(format!("ses alpha {a} outside [0, 1]"));
                    }
                }
                Ok(())
            }
            ForecasterSpec::Holt { alpha, beta } => {
                for (name, value) in [("alpha", alpha), ("beta", beta)] {
                    if let Some(v) = value {
                        if !(0.0..=1.0).contains(v) {
                            return fail(format!("holt {name} {v} outside [0, 1]"));
                        }
                    }
                }
                Ok(())
            }
            ForecasterSpec::Arima { p, d, q } => {
                if *p > arima::MAX_AR || *q > arima::MAX_MA || *d > arima::MAX_DIFF {
                    return fail(format!("arima order ({p},{d},{q}) outside p,q <= 5, d <= 2"));
                }
                Ok(())
            }
            ForecasterSpec::LaggedRidge { lags, lambda } => {
                if *lags < 1 {
                    return fail("ridge needs at least 1 lag".into());
                }
                if !lambda.is_finite() || *lambda < 0.0 {
                    return fail(format!("ridge penalty {lambda} must be finite and >= 0"));
                }
                Ok(())
            }
        }
    }

    /// Minimum training length the model can be fit on.
    pub fn min_train_len(&self) -> usize {
        match self {
            ForecasterSpec::NaiveDrift | ForecasterSpec::Ses { .. } | ForecasterSpec::Holt { .. } => 2,
            ForecasterSpec::NaiveSeasonal { period } => (*period).max(2),
            ForecasterSpec::Arima { p, d, q } => p + d + q + 2,
            ForecasterSpec::AutoArima => 8,
            ForecasterSpec::LaggedRidge { lags, .. } => lags + 2,
        }
    }

    /// Stable label used in report rows and file names.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ForecasterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForecasterSpec::NaiveDrift => write!(f, "naive_drift"),
            ForecasterSpec::NaiveSeasonal { period: 1 } => write!(f, "naive_seasonal"),
            ForecasterSpec::NaiveSeasonal { period } => write!(f, "naive_seasonal({period})"),
            ForecasterSpec::Ses { alpha: None } => write!(f, "ses"),
            ForecasterSpec::Ses { alpha: Some(a) } => write!(f, "ses({a})"),
            ForecasterSpec::Holt { alpha: None, beta: None } => write!(f, "holt"),
            ForecasterSpec::Holt { alpha, beta } => {
                let show = |v: &Option<f64>| match v {
                    Some(x) => x.to_string(),
                    None => "auto".to_string(),
                };
                write!(f, "holt({},{})", show(alpha), show(beta))
            }
            ForecasterSpec::Arima { p, d, q } => write!(f, "arima({p},{d},{q})"),
            ForecasterSpec::AutoArima => write!(f, "auto_arima"),
            ForecasterSpec::LaggedRidge { lags, lambda } => {
                write!(f, "ridge(lags={lags},lambda={lambda})")
            }
        }
    }
}

impl FromStr for ForecasterSpec {
    type Err = ForecastError;

    /// Parses CLI-style model strings, e.g. `naive_seasonal`, `ses(0.4)`,
    /// `arima(2,1,1)`, `ridge(lags=30,lambda=1.0)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        let (name, args) = match lower.find('(') {
            Some(open) => {
                let close = lower
                    .rfind(')')
                    .ok_or_else(|| ForecastError::InvalidSpec(format!("unbalanced parens in {s:?}")))?;
                (&lower[..open], &lower[open + 1..close])
            }
            None => (lower.as_str(), ""),
        };
        let parts: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').collect()
        };
        let bad = |msg: &str| ForecastError::InvalidSpec(format!("{msg} in {s:?}"));

        let spec = match name {
            "naive_drift" | "drift" => ForecasterSpec::NaiveDrift,
            "naive_seasonal" | "seasonal" => {
                let period = match parts.as_slice() {
                    [] => 1,
                    [k] => k.parse().map_err(|_| bad("bad seasonal period"))?,
                    _ => return Err(bad("expected at most one period")),
                };
                ForecasterSpec::NaiveSeasonal { period }
            }
            "ses" => {
                let alpha = match parts.as_slice() {
                    [] => None,
                    [a] if *a == "auto" => None,
                    [a] => Some(a.parse().map_err(|_| bad("bad ses alpha"))?),
                    _ => return Err(bad("expected at most one alpha")),
                };
                ForecasterSpec::Ses { alpha }
            }
            "holt" => {
                let parse_opt = |t: &str, what: &str| -> Result<Option<f64>, ForecastError> {
                    if t == "auto" {
                        Ok(None)
                    } else {
                        t.parse()
                            .map(Some)
                            .map_err(|_| bad(&format!("bad holt {what}")))
                    }
                };
                let (alpha, beta) = match parts.as_slice() {
                    [] => (None, None),
                    [a, b] => (parse_opt(a, "alpha")?, parse_opt(b, "beta")?),
                    _ => return Err(bad("expected zero or two smoothing parameters")),
                };
                ForecasterSpec::Holt { alpha, beta }
            }
            "arima" => {
                let [p, d, q] = parts.as_slice() else {
                    return Err(bad("expected arima(p,d,q)"));
                };
                ForecasterSpec::Arima {
                    p: p.parse().map_err(|_| bad("bad arima p"))?,
                    d: d.parse().map_err(|_| bad("bad arima d"))?,
                    q: q.parse().map_err(|_| bad("bad arima q"))?,
                }
            }
            "auto_arima" | "autoarima" => ForecasterSpec::AutoArima,
            "ridge" | "lagged_ridge" => {
                let mut lags = 30usize;
                let mut lambda = 1.0f64;
                for (position, part) in parts.iter().enumerate() {
                    match part.split_once('=') {
                        Some(("lags", v)) => lags = v.parse().map_err(|_| bad("bad ridge lags"))?,
                        Some(("lambda", v)) => {
                            lambda = v.parse().map_err(|_| bad("bad ridge lambda"))?
                        }
                        Some(_) => return Err(bad("unknown ridge parameter")),
                        None if position == 0 => {
                            lags = part.parse().map_err(|_| bad("bad ridge lags"))?
                        }
                        None if position == 1 => {
                            lambda = part.parse().map_err(|_| bad("bad ridge lambda"))?
                        }
                        None => return Err(bad("too many ridge parameters")),
                    }
                }
                ForecasterSpec::LaggedRidge { lags, lambda }
            }
            other => {
                return Err(ForecastError::InvalidSpec(format!(
                    "unknown model {other:?}"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A point forecast of `horizon` steps from the end of the training window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    /// Index of the last training observation within the fitted window.
    pub origin: usize,
    pub horizon: usize,
    pub values: Vec<f64>,
}

/// Fits `spec` on the training series and forecasts `horizon` steps.
pub fn fit_predict(
    spec: &ForecasterSpec,
    train: &TimeSeries,
    horizon: usize,
) -> Result<Forecast, ForecastError> {
    fit_predict_values(spec, train.values(), horizon)
}

/// Slice-level entry point used by the backtest engine.
pub fn fit_predict_values(
    spec: &ForecasterSpec,
    train: &[f64],
    horizon: usize,
) -> Result<Forecast, ForecastError> {
    spec.validate()?;
    if horizon < 1 {
        return Err(ForecastError::InvalidSpec(
            "horizon must be at least 1".to_string(),
        ));
    }
    if train.len() < spec.min_train_len() {
        return Err(ForecastError::InsufficientData {
            needed: spec.min_train_len(),
            got: train.len(),
        });
    }

    let values = match spec {
        ForecasterSpec::NaiveDrift => naive::naive_drift(train, horizon)?,
        ForecasterSpec::NaiveSeasonal { period } => naive::naive_seasonal(train, *period, horizon)?,
        ForecasterSpec::Ses { alpha } => {
            let fit = smoothing::fit_ses(train, *alpha)?;
            vec![fit.level; horizon]
        }
        ForecasterSpec::Holt { alpha, beta } => {
            let fit = smoothing::fit_holt(train, *alpha, *beta)?;
            (1..=horizon)
                .map(|h| fit.level + h as f64 * fit.trend)
                .collect()
        }
        ForecasterSpec::Arima { p, d, q } => ArimaModel::fit(train, *p, *d, *q)?.forecast(horizon),
        ForecasterSpec::AutoArima => ArimaModel::auto(train)?.forecast(horizon),
        ForecasterSpec::LaggedRidge { lags, lambda } => {
            ridge::fit_ridge(train, *lags, *lambda)?.forecast(train, horizon)
        }
    };
    debug_assert_eq!(values.len(), horizon);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ForecastError::SingularFit);
    }
    Ok(Forecast {
        origin: train.len() - 1,
        horizon,
        values,
    })
}
