//! One-shot pipeline: plane coordinates, distance matrix, spectra, and the
//! backtest grid, all into the output directory.

use anyhow::Result;

use crate::config::RunConfig;

/// Returns the total number of failed cells across stages.
pub fn run(config: &RunConfig) -> Result<usize> {
    super::chplane::run(config)?;
    super::pjsd::run(config)?;
    let psd_failures = super::psd::run(config, None, None)?;
    let backtest_failures = super::backtest::run(config)?;
    Ok(psd_failures + backtest_failures)
}
