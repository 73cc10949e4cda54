//! `wavecast` command-line front end.

mod commands;
mod config;
mod csvio;
mod error;

use clap::{Parser, Subcommand};

use crate::commands::{features, filters, forecast, simulate, transform};

/// Causal wavelet features and linear forecasting baselines.
///
/// Exit codes: 0 success, 1 data or runtime error, 2 usage or
/// configuration error. Subcommands accept --config FILE with
/// `key = value` lines ('#' starts a comment); flags override the file.
#[derive(Debug, Parser)]
#[command(name = "wavecast", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    Simulate(simulate::Args),
    Transform(transform::Args),
    Features(features::Args),
    Forecast(forecast::Args),
    Filters(filters::Args),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate::run(args),
        Command::Transform(args) => transform::run(args),
        Command::Features(args) => features::run(args),
        Command::Forecast(args) => forecast::run(args),
        Command::Filters(args) => filters::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
