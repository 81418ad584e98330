//! Rolling-origin backtest with horizon-filtered scoring.
//!
//! For each target date `t`, the model is refit on the window ending
//! `horizon` steps before `t` and only the `horizon`-th forecast value is
//! recorded, so every target point is scored by a forecast made exactly
//! `horizon` steps earlier. Origins therefore begin `horizon - 1` steps
//! before the split; when the nominal window would reach past the start of
//! the available history it is truncated there, keeping the score count
//! equal to the target length for every horizon.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::forecast::{fit_predict_values, ForecastError, ForecasterSpec};
use crate::ingest::TimeSeries;

#[derive(Debug, Error)]
pub enum BacktestError {
    #[error("insufficient history: {0}")]
    InsufficientHistory(String),
    #[error("length mismatch: {forecasts} forecasts vs {actuals} actuals")]
    LengthMismatch { forecasts: usize, actuals: usize },
    #[error("actual value at index {0} is zero; MAPE undefined")]
    ZeroActual(usize),
    #[error("group {model} @ horizon {horizon} has {cells} cells, need at least 2")]
    EmptyGroup {
        model: String,
        horizon: usize,
        cells: usize,
    },
    #[error(transparent)]
    Forecast(#[from] ForecastError),
}

/// One backtest cell configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSpec {
    pub model: ForecasterSpec,
    /// Training window length in samples.
    pub window: usize,
    /// Forecast horizon in steps.
    pub horizon: usize,
    /// Origin stride; 1 refits at every target point.
    pub stride: usize,
    /// Grow the window from the series start instead of sliding it.
    pub expanding: bool,
}

impl BacktestSpec {
    pub fn new(model: ForecasterSpec, window: usize, horizon: usize) -> Self {
        Self {
            model,
            window,
            horizon,
            stride: 1,
            expanding: false,
        }
    }
}

/// One scored target point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub date: NaiveDate,
    pub actual: f64,
    pub forecast: f64,
}

/// Outcome of a single backtest cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestRun {
    pub trace: Vec<TracePoint>,
    pub mape: f64,
    /// Origins where the model raised a singular fit and the last-value
    /// fallback was used instead.
    pub fallbacks: usize,
}

/// Runs the spec's model over every origin.
pub fn run(
    spec: &BacktestSpec,
    train: &TimeSeries,
    target: &TimeSeries,
) -> Result<BacktestRun, BacktestError> {
    spec.model.validate()?;
    let model = spec.model.clone();
    run_with(
        |window_values, horizon| {
            fit_predict_values(&model, window_values, horizon).map(|f| f.values)
        },
        spec.window,
        spec.horizon,
        spec.stride,
        spec.expanding,
        train,
        target,
    )
}

/// Backtest engine over an arbitrary fit-and-forecast closure. The closure
/// receives the training window and the horizon and returns the full
/// forecast path; only its last element is scored. A `SingularFit` from the
/// closure falls back to last-value carry-forward and is counted.
pub fn run_with<F>(
    mut fit: F,
    window: usize,
    horizon: usize,
    stride: usize,
    expanding: bool,
    train: &TimeSeries,
    target: &TimeSeries,
) -> Result<BacktestRun, BacktestError>
where
    F: FnMut(&[f64], usize) -> Result<Vec<f64>, ForecastError>,
{
    if horizon < 1 || stride < 1 {
        return Err(BacktestError::InsufficientHistory(
            "horizon and stride must be at least 1".to_string(),
        ));
    }
    if target.is_empty() {
        return Err(BacktestError::InsufficientHistory(
            "target segment is empty".to_string(),
        ));
    }
    let n_train = train.len();
    if n_train < window {
        return Err(BacktestError::InsufficientHistory(format!(
            "window of {window} samples exceeds the {n_train}-sample training series"
        )));
    }
    if n_train < horizon {
        return Err(BacktestError::InsufficientHistory(format!(
            "horizon {horizon} reaches before the start of the {n_train}-sample training series"
        )));
    }

    let mut combined = train.values().to_vec();
    combined.extend_from_slice(target.values());

    let mut trace = Vec::with_capacity(target.len());
    let mut fallbacks = 0usize;
    let mut j = 0;
    while j < target.len() {
        let end = n_train + j - horizon; // inclusive index of the origin
        let start = if expanding {
            0
        } else {
            (end + 1).saturating_sub(window)
        };
        let history = &combined[start..=end];
        let forecast = match fit(history, horizon) {
            Ok(path) => {
                debug_assert_eq!(path.len(), horizon);
                path[horizon - 1]
            }
            Err(ForecastError::SingularFit) => {
                fallbacks += 1;
                *history.last().expect("window is never empty")
            }
            Err(other) => return Err(other.into()),
        };
        trace.push(TracePoint {
            date: target.dates()[j],
            actual: target.values()[j],
            forecast,
        });
        j += stride;
    }

    let forecasts: Vec<f64> = trace.iter().map(|t| t.forecast).collect();
    let actuals: Vec<f64> = trace.iter().map(|t| t.actual).collect();
    let mape = mape(&forecasts, &actuals)?;
    Ok(BacktestRun {
        trace,
        mape,
        fallbacks,
    })
}

/// Mean absolute percentage error, `(1/T) sum |f - a| / |a| * 100`.
pub fn mape(forecasts: &[f64], actuals: &[f64]) -> Result<f64, BacktestError> {
    if forecasts.len() != actuals.len() || forecasts.is_empty() {
        return Err(BacktestError::LengthMismatch {
            forecasts: forecasts.len(),
            actuals: actuals.len(),
        });
    }
    let mut total = 0.0;
    for (i, (&f, &a)) in forecasts.iter().zip(actuals).enumerate() {
        if a == 0.0 {
            return Err(BacktestError::ZeroActual(i));
        }
        total += ((f - a) / a).abs();
    }
    Ok(total / forecasts.len() as f64 * 100.0)
}

/// One cell of the full (model, series, window, horizon) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub model: String,
    pub series: String,
    pub window: String,
    pub horizon: usize,
    pub mape: f64,
    pub fallbacks: usize,
    pub trace: Vec<TracePoint>,
}

/// All evaluated cells of a backtest grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BacktestReport {
    pub cells: Vec<ReportCell>,
}

/// Mean and sample standard deviation of cell MAPEs per (model, horizon),
/// pooled across series and windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub model: String,
    pub horizon: usize,
    pub mean: f64,
    pub std: f64,
    pub cells: usize,
}

/// Aggregates a report; every (model, horizon) group must hold at least two
/// cells for the sample standard deviation to exist.
pub fn aggregate(report: &BacktestReport) -> Result<Vec<AggregateRow>, BacktestError> {
    let mut groups: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for cell in &report.cells {
        groups
            .entry((cell.model.clone(), cell.horizon))
            .or_default()
            .push(cell.mape);
    }
    let mut rows = Vec::with_capacity(groups.len());
    for ((model, horizon), mapes) in groups {
        if mapes.len() < 2 {
            return Err(BacktestError::EmptyGroup {
                model,
                horizon,
                cells: mapes.len(),
            });
        }
        let n = mapes.len() as f64;
        let mean = mapes.iter().sum::<f64>() / n;
        let var = mapes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
        rows.push(AggregateRow {
            model,
            horizon,
            mean,
            std: var.sqrt(),
            cells: mapes.len(),
        });
    }
    Ok(rows)
}
