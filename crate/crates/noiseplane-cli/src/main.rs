mod args;
mod commands;
mod config;
mod output;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(0) => {}
        Ok(failures) => {
            eprintln!("{failures} cell(s) failed; see errors.json in the output directory");
            std::process::exit(1);
        }
        Err(error) => {
            eprintln!("error: {error:#}");
            std::process::exit(2);
        }
    }
}

/// Runs the selected command; returns the number of failed cells for
/// commands with a partial-failure policy.
fn dispatch(cli: &Cli) -> anyhow::Result<usize> {
    match &cli.command {
        Command::Chplane => {
            let config = config::resolve(cli, None, None, false, None)?;
            commands::chplane::run(&config)?;
            Ok(0)
        }
        Command::Pjsd => {
            let config = config::resolve(cli, None, None, false, None)?;
            commands::pjsd::run(&config)?;
            Ok(0)
        }
        Command::Psd { segment, overlap } => {
            let config = config::resolve(cli, None, None, false, None)?;
            commands::psd::run(&config, *segment, *overlap)
        }
        Command::Noise { alpha, length } => {
            let config = config::resolve(cli, None, None, false, None)?;
            commands::noise::run(&config, *alpha, *length)?;
            Ok(0)
        }
        Command::Backtest {
            models,
            horizons,
            expanding,
            stride,
        } => {
            let config = config::resolve(cli, models.as_deref(), horizons.as_deref(), *expanding, *stride)?;
            commands::backtest::run(&config)
        }
        Command::Report {
            models,
            horizons,
            expanding,
            stride,
        } => {
            let config = config::resolve(cli, models.as_deref(), horizons.as_deref(), *expanding, *stride)?;
            commands::report::run(&config)
        }
    }
}
