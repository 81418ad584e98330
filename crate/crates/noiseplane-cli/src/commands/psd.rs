//! Welch spectra and power-law fits per input series. A failing series is
//! recorded in the error manifest and the run continues.

use anyhow::Result;
use noiseplane::ingest::Window;
use noiseplane::spectral::{default_band, default_segment, fit_power_law, welch_psd};

use crate::args::OutputFormat;
use crate::commands::{ensure_out_dir, load_inputs, windowed};
use crate::config::RunConfig;
use crate::output::{format_sig, sanitize, write_csv, write_json};

/// Returns the number of failed series after writing per-series artifacts,
/// a summary table, and an error manifest when needed.
pub fn run(config: &RunConfig, segment: Option<usize>, overlap: Option<f64>) -> Result<usize> {
    let inputs = load_inputs(config)?;
    ensure_out_dir(config)?;
    let window = config.windows_or(&[Window::Full])[0];
    let overlap = overlap.unwrap_or(0.5);

    let mut summary: Vec<(String, noiseplane::PowerLawFit)> = Vec::new();
    let mut failures: Vec<serde_json::Value> = Vec::new();

    for series in &inputs {
        let outcome = (|| -> Result<(String, noiseplane::PsdEstimate, noiseplane::PowerLawFit)> {
            let segment_series = windowed(series, window, config)?;
            let seg_len = segment.unwrap_or_else(|| default_segment(segment_series.len()));
            let psd = welch_psd(&segment_series, seg_len, overlap)?;
            let fit = fit_power_law(&psd, default_band(seg_len))?;
            Ok((series.name().to_string(), psd, fit))
        })();
        match outcome {
            Ok((name, psd, fit)) => {
                let stem = sanitize(&name);
                match config.format {
                    OutputFormat::Csv => {
                        let rows: Vec<Vec<String>> = psd
                            .freqs
                            .iter()
                            .zip(&psd.power)
                            .map(|(f, p)| vec![format_sig(*f), format_sig(*p)])
                            .collect();
                        write_csv(
                            &config.out.join(format!("psd_{stem}.csv")),
                            &["freq", "power"],
                            &rows,
                        )?;
                    }
                    OutputFormat::Json => {
                        write_json(
                            &config.out.join(format!("psd_{stem}.json")),
                            &serde_json::json!({
                                "series": name,
                                "segment": psd.segment_len,
                                "overlap": psd.overlap,
                                "window": psd.window,
                                "freqs": psd.freqs,
                                "power": psd.power,
                            }),
                        )?;
                    }
                }
                std::fs::write(
                    config.out.join(format!("psd_{stem}_fit.json")),
                    fit.to_json(),
                )?;
                summary.push((name, fit));
            }
            Err(error) => failures.push(serde_json::json!({
                "series": series.name(),
                "error": error.to_string(),
            })),
        }
    }

    let rows: Vec<Vec<String>> = summary
        .iter()
        .map(|(name, fit)| {
            vec![
                name.clone(),
                format_sig(fit.alpha),
                format_sig(fit.intercept),
                format_sig(fit.r2),
            ]
        })
        .collect();
    write_csv(
        &config.out.join("psd_summary.csv"),
        &["series", "alpha", "intercept", "r2"],
        &rows,
    )?;

    if !failures.is_empty() {
        write_json(
            &config.out.join("errors.json"),
            &serde_json::json!({ "errors": failures }),
        )?;
    }
    Ok(failures.len())
}
