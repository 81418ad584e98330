//! The full (model x series x window x horizon) backtest grid. Failing
//! cells are recorded in an error manifest and the run continues; the exit
//! status reflects whether any cell failed.

use anyhow::Result;
use chrono::NaiveDate;
use noiseplane::backtest::{aggregate, run as run_cell, BacktestReport, BacktestSpec, ReportCell};
use noiseplane::ingest::{self, SplitSpec, TimeSeries, Window};

use crate::commands::{ensure_out_dir, load_inputs};
use crate::config::RunConfig;
use crate::output::{format_sig, sanitize, write_csv, write_json};

/// Returns the number of failed cells.
pub fn run(config: &RunConfig) -> Result<usize> {
    let inputs = load_inputs(config)?;
    ensure_out_dir(config)?;
    let traces_dir = config.out.join("traces");
    std::fs::create_dir_all(&traces_dir)?;
    let windows = config.windows_or(&[Window::ThreeYears, Window::OneYear, Window::SixMonths]);

    let mut report = BacktestReport::default();
    let mut failures: Vec<serde_json::Value> = Vec::new();

    for series in &inputs {
        for &window in &windows {
            let split = match split_for(series, window, config.split_date) {
                Ok(pair) => pair,
                Err(error) => {
                    for model in &config.models {
                        for &horizon in &config.horizons {
                            failures.push(cell_error(
                                &model.label(),
                                series.name(),
                                window,
                                horizon,
                                &error.to_string(),
                            ));
                        }
                    }
                    continue;
                }
            };
            let (train, target) = split;
            for model in &config.models {
                for &horizon in &config.horizons {
                    let mut spec = BacktestSpec::new(model.clone(), train.len(), horizon);
                    spec.stride = config.stride;
                    spec.expanding = config.expanding;
                    match run_cell(&spec, &train, &target) {
                        Ok(outcome) => report.cells.push(ReportCell {
                            model: model.label(),
                            series: series.name().to_string(),
                            window: window.label().to_string(),
                            horizon,
                            mape: outcome.mape,
                            fallbacks: outcome.fallbacks,
                            trace: outcome.trace,
                        }),
                        Err(error) => failures.push(cell_error(
                            &model.label(),
                            series.name(),
                            window,
                            horizon,
                            &error.to_string(),
                        )),
                    }
                }
            }
        }
    }

    write_cells(config, &report)?;
    write_traces(&traces_dir, &report)?;
    write_aggregates(config, &report)?;

    if !failures.is_empty() {
        write_json(
            &config.out.join("errors.json"),
            &serde_json::json!({ "errors": failures }),
        )?;
    }
    Ok(failures.len())
}

fn split_for(
    series: &TimeSeries,
    window: Window,
    split_date: NaiveDate,
) -> Result<(TimeSeries, TimeSeries)> {
    let pair = ingest::split(series, &SplitSpec::new(split_date, window))?;
    Ok(pair)
}

fn cell_error(
    model: &str,
    series: &str,
    window: Window,
    horizon: usize,
    message: &str,
) -> serde_json::Value {
    serde_json::json!({
        "model": model,
        "series": series,
        "window": window.label(),
        "horizon": horizon,
        "error": message,
    })
}

fn write_cells(config: &RunConfig, report: &BacktestReport) -> Result<()> {
    let rows: Vec<Vec<String>> = report
        .cells
        .iter()
        .map(|cell| {
            vec![
                cell.model.clone(),
                cell.series.clone(),
                cell.window.clone(),
                cell.horizon.to_string(),
                format_sig(cell.mape),
                cell.fallbacks.to_string(),
            ]
        })
        .collect();
    write_csv(
        &config.out.join("backtest_cells.csv"),
        &["model", "series", "window", "horizon", "mape", "fallbacks"],
        &rows,
    )?;

    let json_cells: Vec<serde_json::Value> = report
        .cells
        .iter()
        .map(|cell| {
            serde_json::json!({
                "model": cell.model,
                "series": cell.series,
                "window": cell.window,
                "horizon": cell.horizon,
                "mape": cell.mape,
                "fallbacks": cell.fallbacks,
            })
        })
        .collect();
    write_json(
        &config.out.join("backtest_cells.json"),
        &serde_json::json!({ "cells": json_cells }),
    )
}

fn write_traces(traces_dir: &std::path::Path, report: &BacktestReport) -> Result<()> {
    for cell in &report.cells {
        let stem = format!(
            "{}_{}_{}_h{}",
            sanitize(&cell.model),
            sanitize(&cell.series),
            cell.window,
            cell.horizon
        );
        let rows: Vec<Vec<String>> = cell
            .trace
            .iter()
            .map(|point| {
                vec![
                    point.date.format("%Y-%m-%d").to_string(),
                    format_sig(point.actual),
                    format_sig(point.forecast),
                ]
            })
            .collect();
        write_csv(
            &traces_dir.join(format!("{stem}.csv")),
            &["date", "actual", "forecast"],
            &rows,
        )?;
    }
    Ok(())
}

fn write_aggregates(config: &RunConfig, report: &BacktestReport) -> Result<()> {
    // The sample standard deviation needs at least two cells per
    // (model, horizon) group; smaller runs skip the aggregate view.
    let rows = match aggregate(report) {
        Ok(rows) => rows,
        Err(_) => return Ok(()),
    };
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                row.model.clone(),
                row.horizon.to_string(),
                format_sig(row.mean),
                format_sig(row.std),
                row.cells.to_string(),
            ]
        })
        .collect();
    write_csv(
        &config.out.join("backtest_aggregate.csv"),
        &["model", "horizon", "mean_mape", "std_mape", "cells"],
        &table,
    )?;
    let json_rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "model": row.model,
                "horizon": row.horizon,
                "mean": row.mean,
                "std": row.std,
                "cells": row.cells,
            })
        })
        .collect();
    write_json(
        &config.out.join("backtest_aggregate.json"),
        &serde_json::json!({ "aggregates": json_rows }),
    )
}
