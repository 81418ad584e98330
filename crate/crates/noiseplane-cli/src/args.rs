//! Command-line surface.

use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "noiseplane",
    version,
    about = "Ordinal-pattern randomness measures and forecast backtests for daily time-series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON config file; explicit flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Input CSV file (repeatable).
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,

    /// Value column to read from the inputs.
    #[arg(long, global = true)]
    pub column: Option<String>,

    /// Training window (repeatable): 3y, 1y, 6m, or full.
    #[arg(long, global = true)]
    pub window: Vec<String>,

    /// Embedding dimension override (defaults: 5 for 3y/full, 4 for 1y/6m).
    #[arg(long, global = true)]
    pub d: Option<usize>,

    /// Base PRNG seed; falls back to $NOISEPLANE_SEED, then 42.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of noise seeds to average over.
    #[arg(long, global = true)]
    pub seeds: Option<usize>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format for the analysis artifacts.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Train/target split date (YYYY-MM-DD).
    #[arg(long, global = true)]
    pub split_date: Option<NaiveDate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complexity-entropy plane coordinates for the inputs, noise
    /// references, and boundary curves, one file set per window.
    Chplane,
    /// Distance matrix between each input and the five colored-noise
    /// references, averaged over seeds.
    Pjsd,
    /// Welch power spectra and fitted power-law exponents.
    Psd {
        /// Welch segment length (default: 256, shrunk for short series).
        #[arg(long)]
        segment: Option<usize>,
        /// Segment overlap fraction in [0, 0.9].
        #[arg(long)]
        overlap: Option<f64>,
    },
    /// Generate one colored-noise series.
    Noise {
        /// Spectral exponent of 1/f^alpha.
        #[arg(long)]
        alpha: f64,
        /// Sample count.
        #[arg(long)]
        length: usize,
    },
    /// Rolling-origin backtest grid over models, windows, and horizons.
    Backtest {
        /// Comma-separated model list, e.g.
        /// "naive_seasonal,naive_drift,arima(1,1,1),ridge(lags=30,lambda=1)".
        #[arg(long)]
        models: Option<String>,
        /// Comma-separated forecast horizons, e.g. "1,7,30".
        #[arg(long)]
        horizons: Option<String>,
        /// Grow the training window from the series start instead of
        /// sliding a fixed-length window.
        #[arg(long)]
        expanding: bool,
        /// Origin stride (default 1: refit at every target point).
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Run chplane, pjsd, psd, and backtest in one pass.
    Report {
        #[arg(long)]
        models: Option<String>,
        #[arg(long)]
        horizons: Option<String>,
        #[arg(long)]
        expanding: bool,
        #[arg(long)]
        stride: Option<usize>,
    },
}
