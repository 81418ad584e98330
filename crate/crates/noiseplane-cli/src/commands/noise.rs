//! Single colored-noise series emission as a two-column file.

use anyhow::Result;
use noiseplane::noise::{generate, NoiseSpec};

use crate::args::OutputFormat;
use crate::commands::ensure_out_dir;
use crate::config::RunConfig;
use crate::output::{format_sig, write_csv, write_json};

pub fn run(config: &RunConfig, alpha: f64, length: usize) -> Result<()> {
    anyhow::ensure!(length >= 8, "length must be at least 8");
    anyhow::ensure!(
        alpha.is_finite() && alpha >= 0.0,
        "alpha must be finite and non-negative"
    );
    ensure_out_dir(config)?;
    let series = generate(&NoiseSpec {
        alpha,
        length,
        seed: config.seed,
    });

    let stem = format!("noise_a{alpha}_s{}", config.seed);
    match config.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = series
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| vec![i.to_string(), format_sig(*v)])
                .collect();
            write_csv(
                &config.out.join(format!("{stem}.csv")),
                &["index", "value"],
                &rows,
            )?;
        }
        OutputFormat::Json => {
            write_json(
                &config.out.join(format!("{stem}.json")),
                &serde_json::json!({
                    "alpha": alpha,
                    "length": length,
                    "seed": config.seed,
                    "values": series.values(),
                }),
            )?;
        }
    }
    Ok(())
}
