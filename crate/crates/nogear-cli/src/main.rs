//! `nogear` - coherent forecasting for count time series.
//!
//! Subcommands cover the whole pipeline: simulate data from NoGeAR(1) or a
//! comparator INAR(1) model, fit by conditional maximum likelihood, produce
//! coherent forecasts with HPP intervals, run the accuracy and coverage
//! experiment harnesses, and compute adequacy diagnostics.
//!
//! Exit codes: 0 success, 2 usage or constraint errors, 3 unreadable or
//! unparsable input, 4 degenerate data.

use clap::{Parser, Subcommand};

mod cmd;
mod csvio;
mod schema;

/// CLI error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: String) -> Self {
        Self { code: 2, message }
    }

    fn input(message: String) -> Self {
        Self { code: 3, message }
    }

    fn degenerate(message: String) -> Self {
        Self { code: 4, message }
    }
}

impl From<nogear_core::Error> for CliError {
    fn from(err: nogear_core::Error) -> Self {
        let code = match err {
            nogear_core::Error::DegenerateSeries => 4,
            nogear_core::Error::SeriesTooShort { .. } => 3,
            _ => 2,
        };
        Self { code, message: err.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "nogear",
    version,
    about = "Coherent forecasting for NoGeAR(1) and comparator INAR(1) count time-series models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a count series from a model.
    Simulate(cmd::SimulateArgs),
    /// Fit model parameters by conditional maximum likelihood.
    Fit(cmd::FitArgs),
    /// Coherent point forecasts and HPP intervals from a fit.
    Forecast(cmd::ForecastArgs),
    /// Forecast-accuracy experiment across model families.
    Evaluate(cmd::EvaluateArgs),
    /// Empirical HPP-interval coverage experiment.
    Coverage(cmd::CoverageArgs),
    /// Residual, PIT, and jumps diagnostics for a fit.
    Diagnose(cmd::DiagnoseArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => cmd::simulate(args),
        Command::Fit(args) => cmd::fit(args),
        Command::Forecast(args) => cmd::forecast(args),
        Command::Evaluate(args) => cmd::evaluate(args),
        Command::Coverage(args) => cmd::coverage(args),
        Command::Diagnose(args) => cmd::diagnose_cmd(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message);
        std::process::exit(err.code);
    }
}
