//! Resolved run configuration: defaults, then config file, then flags.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use noiseplane::forecast::ForecasterSpec;
use noiseplane::ingest::Window;
use serde::Deserialize;

use crate::args::{Cli, OutputFormat};

pub const DEFAULT_SPLIT_DATE: &str = "2023-07-04";

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub column: String,
    /// Empty means "use the command's default window set".
    pub windows: Vec<Window>,
    pub dimension: Option<usize>,
    pub seed: u64,
    pub seeds: usize,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub split_date: NaiveDate,
    pub models: Vec<ForecasterSpec>,
    pub horizons: Vec<usize>,
    pub expanding: bool,
    pub stride: usize,
}

impl RunConfig {
    /// Windows to analyze, falling back to the canonical training trio.
    pub fn windows_or(&self, default: &[Window]) -> Vec<Window> {
        if self.windows.is_empty() {
            default.to_vec()
        } else {
            self.windows.clone()
        }
    }

    /// Seeds used for noise averaging: `seed, seed+1, ..`.
    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|i| self.seed + i).collect()
    }
}

/// Config-file fields; everything optional so flags can fill the gaps.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    inputs: Option<Vec<PathBuf>>,
    column: Option<String>,
    windows: Option<Vec<String>>,
    dimension: Option<usize>,
    seed: Option<u64>,
    seeds: Option<usize>,
    out: Option<PathBuf>,
    format: Option<String>,
    split_date: Option<NaiveDate>,
    models: Option<Vec<String>>,
    horizons: Option<Vec<usize>>,
    expanding: Option<bool>,
    stride: Option<usize>,
}

fn parse_windows(labels: &[String]) -> Result<Vec<Window>> {
    labels
        .iter()
        .map(|label| {
            Window::parse_label(label)
                .with_context(|| format!("unknown window {label:?}; expected 3y, 1y, 6m, or full"))
        })
        .collect()
}

pub fn parse_models(text: &str) -> Result<Vec<ForecasterSpec>> {
    // Split on commas outside parentheses so "arima(2,1,1)" stays whole.
    let mut specs = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            ',' if depth == 0 => {
                if !current.trim().is_empty() {
                    specs.push(current.trim().parse::<ForecasterSpec>()?);
                }
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        specs.push(current.trim().parse::<ForecasterSpec>()?);
    }
    if specs.is_empty() {
        bail!("empty model list");
    }
    Ok(specs)
}

pub fn parse_horizons(text: &str) -> Result<Vec<usize>> {
    let horizons: Vec<usize> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("bad horizon {part:?}"))
        })
        .collect::<Result<_>>()?;
    if horizons.is_empty() || horizons.contains(&0) {
        bail!("horizons must be positive integers");
    }
    Ok(horizons)
}

/// Builds the effective configuration. Command-specific model/horizon flags
/// are merged by the caller because they live on the subcommand.
pub fn resolve(
    cli: &Cli,
    models_flag: Option<&str>,
    horizons_flag: Option<&str>,
    expanding_flag: bool,
    stride_flag: Option<usize>,
) -> Result<RunConfig> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("cannot parse config file {}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let env_seed = std::env::var("NOISEPLANE_SEED")
        .ok()
        .and_then(|raw| raw.parse::<u64>().ok());

    let inputs = if !cli.input.is_empty() {
        cli.input.clone()
    } else {
        file.inputs.unwrap_or_default()
    };

    let windows = if !cli.window.is_empty() {
        parse_windows(&cli.window)?
    } else {
        parse_windows(&file.windows.unwrap_or_default())?
    };

    let format = match (cli.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("json")) => OutputFormat::Json,
        (None, Some("csv")) | (None, None) => OutputFormat::Csv,
        (None, Some(other)) => bail!("unknown format {other:?} in config file"),
    };

    let models = match (models_flag, file.models) {
        (Some(text), _) => parse_models(text)?,
        (None, Some(list)) => {
            let joined = list.join(",");
            parse_models(&joined)?
        }
        (None, None) => vec![
            ForecasterSpec::NaiveSeasonal { period: 1 },
            ForecasterSpec::NaiveDrift,
        ],
    };

    let horizons = match (horizons_flag, file.horizons) {
        (Some(text), _) => parse_horizons(text)?,
        (None, Some(list)) if !list.is_empty() => list,
        _ => vec![1, 7, 30],
    };

    let stride = stride_flag.or(file.stride).unwrap_or(1);
    if stride == 0 {
        bail!("stride must be at least 1");
    }

    Ok(RunConfig {
        inputs,
        column: cli
            .column
            .clone()
            .or(file.column)
            .unwrap_or_else(|| "Close".to_string()),
        windows,
        dimension: cli.d.or(file.dimension),
        seed: cli.seed.or(file.seed).or(env_seed).unwrap_or(42),
        seeds: cli.seeds.or(file.seeds).unwrap_or(10),
        out: cli
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("out")),
        format,
        split_date: cli
            .split_date
            .or(file.split_date)
            .unwrap_or_else(|| DEFAULT_SPLIT_DATE.parse().expect("valid default date")),
        models,
        horizons,
        expanding: expanding_flag || file.expanding.unwrap_or(false),
        stride,
    })
}
