//! Loading, validation, windowing, splitting, and standardization of daily
//! price series stored as CSV files.
//!
//! The canonical input is a Yahoo-Finance-style export: a header row with a
//! `Date` column plus one or more value columns (`Open`, `Close`, ...). Dates
//! are ISO-8601 (`YYYY-MM-DD`), daily granularity, calendar gaps permitted.

use std::path::{Path, PathBuf};

use chrono::{Months, NaiveDate};
use thiserror::Error;

/// Errors raised by ingestion, splitting, and standardization.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("missing column {0:?} in header row")]
    MissingColumn(String),
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("no valid data rows")]
    EmptySeries,
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("cannot standardize a series with zero variance")]
    ZeroVariance,
    #[error("window out of range: {0}")]
    WindowOutOfRange(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A named, date-indexed univariate series of finite real values.
///
/// Dates are strictly increasing with daily granularity; gaps are allowed and
/// the series is treated as evenly sampled by index.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, checking every invariant: equal lengths, strictly
    /// increasing dates, finite values, at least two points.
    pub fn new(
        name: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Self, IngestError> {
        if dates.len() != values.len() {
            return Err(IngestError::InvalidSeries(format!(
                "{} dates but {} values",
                dates.len(),
                values.len()
            )));
        }
        if dates.len() < 2 {
            return Err(IngestError::InvalidSeries(format!(
                "need at least 2 points, got {}",
                dates.len()
            )));
        }
        for pair in dates.windows(2) {
            if pair[0] >= pair[1] {
                return Err(IngestError::InvalidSeries(format!(
                    "dates not strictly increasing at {}",
                    pair[1]
                )));
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(IngestError::InvalidSeries(format!("non-finite value {v}")));
        }
        Ok(Self {
            name: name.into(),
            dates,
            values,
        })
    }

    /// Internal constructor for slices of an already-validated series.
    /// Permits length 1 (a split target may be a single point).
    pub(crate) fn from_parts(name: String, dates: Vec<NaiveDate>, values: Vec<f64>) -> Self {
        debug_assert_eq!(dates.len(), values.len());
        debug_assert!(dates.windows(2).all(|p| p[0] < p[1]));
        Self {
            name,
            dates,
            values,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn last_date(&self) -> NaiveDate {
        *self.dates.last().expect("series is never empty")
    }

    /// The contiguous sub-series with dates in `[from, to]`.
    pub fn slice_by_date(&self, from: NaiveDate, to: NaiveDate) -> TimeSeries {
        let lo = self.dates.partition_point(|d| *d < from);
        let hi = self.dates.partition_point(|d| *d <= to);
        TimeSeries::from_parts(
            self.name.clone(),
            self.dates[lo..hi].to_vec(),
            self.values[lo..hi].to_vec(),
        )
    }
}

/// Named training-window lengths. The windows are realized as start dates
/// anchored to the split date, reproducing the canonical scenario list
/// (split 2023-07-04 gives starts 2020-07-03, 2022-07-03, and 2023-01-04).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    ThreeYears,
    OneYear,
    SixMonths,
    Full,
}

impl Window {
    /// Window start for a given split date; `None` for `Full`, which always
    /// starts at the series' first date.
    pub fn start_date(&self, split_date: NaiveDate) -> Option<NaiveDate> {
        let months = match self {
            Window::ThreeYears => 36,
            Window::OneYear => 12,
            Window::SixMonths => 6,
            Window::Full => return None,
        };
        let anchored = split_date.checked_sub_months(Months::new(months))?;
        match self {
            // The year-based scenarios start one day before the calendar
            // anniversary; the six-month scenario starts exactly on it.
            Window::ThreeYears | Window::OneYear => anchored.pred_opt(),
            _ => Some(anchored),
        }
    }

    /// Short label used in CLI flags and output file names.
    pub fn label(&self) -> &'static str {
        match self {
            Window::ThreeYears => "3y",
            Window::OneYear => "1y",
            Window::SixMonths => "6m",
            Window::Full => "full",
        }
    }

    pub fn parse_label(s: &str) -> Option<Window> {
        match s {
            "3y" => Some(Window::ThreeYears),
            "1y" => Some(Window::OneYear),
            "6m" => Some(Window::SixMonths),
            "full" => Some(Window::Full),
            _ => None,
        }
    }
}

/// Where and how to split a series into train and target segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub split_date: NaiveDate,
    pub window: Window,
}

impl SplitSpec {
    pub fn new(split_date: NaiveDate, window: Window) -> Self {
        Self { split_date, window }
    }
}

/// Loads a series from a CSV file, taking dates from the `Date` column and
/// values from `column`. Rows are sorted by date; any row whose date or value
/// fails to parse aborts the load with [`IngestError::MalformedRow`].
pub fn load_csv(path: impl AsRef<Path>, column: &str) -> Result<TimeSeries, IngestError> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(IngestError::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_path(path)?;

    let headers = reader.headers()?.clone();
    let date_idx = headers
        .iter()
        .position(|h| h == "Date")
        .ok_or_else(|| IngestError::MissingColumn("Date".to_string()))?;
    let value_idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| IngestError::MissingColumn(column.to_string()))?;

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let date_field = record.get(date_idx).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_field, "%Y-%m-%d").map_err(|_| {
            IngestError::MalformedRow {
                line,
                reason: format!("unparseable date {date_field:?}"),
            }
        })?;
        let value_field = record.get(value_idx).unwrap_or("");
        let value: f64 = value_field
            .trim()
            .parse()
            .map_err(|_| IngestError::MalformedRow {
                line,
                reason: format!("unparseable value {value_field:?} in column {column:?}"),
            })?;
        if !value.is_finite() {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("non-finite value {value_field:?}"),
            });
        }
        rows.push((date, value));
    }

    if rows.is_empty() {
        return Err(IngestError::EmptySeries);
    }
    rows.sort_by_key(|(d, _)| *d);
    for pair in rows.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(IngestError::DuplicateDate(pair[0].0));
        }
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    let (dates, values): (Vec<NaiveDate>, Vec<f64>) = rows.into_iter().unzip();
    TimeSeries::new(name, dates, values)
}

/// Re-serializes a series as two columns `(Date, value)` with six decimal
/// places, the inverse of `load_csv(path, "value")`.
pub fn write_csv(series: &TimeSeries, path: impl AsRef<Path>) -> Result<(), IngestError> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(["Date", "value"])?;
    for (date, value) in series.dates().iter().zip(series.values()) {
        writer.write_record([date.format("%Y-%m-%d").to_string(), format!("{value:.6}")])?;
    }
    writer.flush()?;
    Ok(())
}

/// Splits a series into `train` (window start through the split date,
/// inclusive) and `target` (everything after the split date).
pub fn split(series: &TimeSeries, spec: &SplitSpec) -> Result<(TimeSeries, TimeSeries), IngestError> {
    let first = series.first_date();
    let last = series.last_date();
    if spec.split_date < first || spec.split_date >= last {
        return Err(IngestError::WindowOutOfRange(format!(
            "split date {} outside usable range [{first}, {last})",
            spec.split_date
        )));
    }
    let window_start = match spec.window.start_date(spec.split_date) {
        Some(start) => {
            if start >= spec.split_date {
                return Err(IngestError::WindowOutOfRange(format!(
                    "window start {start} not before split date {}",
                    spec.split_date
                )));
            }
            if start < first {
                return Err(IngestError::WindowOutOfRange(format!(
                    "window start {start} precedes first date {first}"
                )));
            }
            start
        }
        None => first,
    };

    let train = series.slice_by_date(window_start, spec.split_date);
    let target = series.slice_by_date(
        spec.split_date.succ_opt().expect("date overflow"),
        last,
    );
    if train.len() < 2 {
        return Err(IngestError::WindowOutOfRange(format!(
            "training window [{window_start}, {}] holds {} points",
            spec.split_date,
            train.len()
        )));
    }
    if target.is_empty() {
        return Err(IngestError::WindowOutOfRange(
            "no points after the split date".to_string(),
        ));
    }
    Ok((train, target))
}

/// Rescales values to sample mean 0 and sample standard deviation 1.
pub fn standardize(series: &TimeSeries) -> Result<TimeSeries, IngestError> {
    if series.len() < 2 {
        return Err(IngestError::InvalidSeries(
            "standardize requires at least 2 points".to_string(),
        ));
    }
    let mut values = series.values().to_vec();
    if !standardize_values(&mut values) {
        return Err(IngestError::ZeroVariance);
    }
    Ok(TimeSeries::from_parts(
        series.name().to_string(),
        series.dates().to_vec(),
        values,
    ))
}

/// In-place mean-0 / sample-std-1 rescaling; returns false when the sample
/// standard deviation is numerically zero.
pub(crate) fn standardize_values(values: &mut [f64]) -> bool {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    if !(std > 1e-12 * (1.0 + mean.abs())) {
        return false;
    }
    for v in values.iter_mut() {
        *v = (*v - mean) / std;
    }
    true
}
