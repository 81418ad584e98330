//! Ordinal-pattern information measures and forecast backtesting for
//! univariate daily time-series.
//!
//! The library quantifies how noise-like a series is and how well simple
//! forecasters do on it:
//!
//! - [`ingest`] loads, windows, splits, and standardizes CSV price series;
//! - [`ordinal`] symbolizes series into ordinal-pattern distributions and
//!   computes permutation entropy;
//! - [`complexity`] places series on the complexity-entropy plane and
//!   measures permutation Jensen-Shannon distances;
//! - [`noise`] synthesizes colored-noise references with prescribed
//!   spectral exponents;
//! - [`spectral`] estimates power spectral densities and fits power-law
//!   exponents;
//! - [`forecast`] provides naive, smoothing, ARIMA, and lagged-ridge models
//!   behind one contract;
//! - [`backtest`] evaluates them by rolling-origin, horizon-filtered MAPE.

pub mod backtest;
pub mod complexity;
pub mod forecast;
pub mod ingest;
pub mod noise;
pub mod ordinal;
pub mod spectral;

pub use backtest::{aggregate, BacktestReport, BacktestRun, BacktestSpec, ReportCell, TracePoint};
pub use complexity::{ch_boundaries, pjsd, statistical_complexity, BoundaryCurve, ChPoint};
pub use forecast::{fit_predict, Forecast, ForecasterSpec};
pub use ingest::{load_csv, split, standardize, SplitSpec, TimeSeries, Window};
pub use noise::{brownian_by_integration, generate, NoiseSpec};
pub use ordinal::{extract_patterns, permutation_entropy, OrdinalConfig, OrdinalDistribution};
pub use spectral::{fit_power_law, welch_psd, PowerLawFit, PsdEstimate};
