//! Subcommand implementations.

pub mod backtest;
pub mod chplane;
pub mod noise;
pub mod pjsd;
pub mod psd;
pub mod report;

use anyhow::{bail, Context, Result};
use noiseplane::ingest::{self, SplitSpec, TimeSeries, Window};

use crate::config::RunConfig;

/// Loads every input series with the configured value column.
pub fn load_inputs(config: &RunConfig) -> Result<Vec<TimeSeries>> {
    if config.inputs.is_empty() {
        bail!("no input series; pass --input at least once");
    }
    config
        .inputs
        .iter()
        .map(|path| {
            ingest::load_csv(path, &config.column)
                .with_context(|| format!("loading {}", path.display()))
        })
        .collect()
}

/// The training segment a window selects: the whole series for `full`,
/// otherwise the split's train side.
pub fn windowed(series: &TimeSeries, window: Window, config: &RunConfig) -> Result<TimeSeries> {
    match window {
        Window::Full => Ok(series.clone()),
        w => {
            let (train, _) = ingest::split(series, &SplitSpec::new(config.split_date, w))
                .with_context(|| format!("windowing {} to {}", series.name(), w.label()))?;
            Ok(train)
        }
    }
}

pub fn ensure_out_dir(config: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&config.out)
        .with_context(|| format!("cannot create output directory {}", config.out.display()))
}
