//! `casino`: gambling strategies in classical and quantum casinos.
//!
//! Every run is reproducible from its seed; summaries echo the resolved
//! settings so that a rerun with the same flags gives identical bytes.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod classical;
mod config;
mod metrics;
mod montecarlo;
mod output;
mod quantum;
mod tables;

/// Seed used when neither a flag nor a config file provides one.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the decision tables of the built-in strategies and check them.
    Tables(tables::TablesArgs),
    /// Play a classical evening, or many with --trials.
    Classical(classical::ClassicalArgs),
    /// Play an evening in a quantum casino.
    Quantum(quantum::QuantumArgs),
    /// Distances, fidelities and Schmidt data of quantum states.
    Metrics(metrics::MetricsArgs),
    /// Payoff statistics over many evenings.
    Montecarlo(montecarlo::MonteCarloArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tables(a) => tables::run(a),
        Command::Classical(a) => classical::run(a).map(|()| 0),
        Command::Quantum(a) => quantum::run(a).map(|()| 0),
        Command::Metrics(a) => metrics::run(a).map(|()| 0),
        Command::Montecarlo(a) => montecarlo::run(a).map(|()| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
