//! `casino classical`: one evening, or a Monte Carlo summary with `--trials`.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::Args;
use serde::Serialize;

use casino_core::classical_casino::{montecarlo_mean_payoff, play, MonteCarloSummary};
use casino_core::sequences::{Bit, BitString, CoinTosses, Eventually};
use casino_core::strategy::{builtin, ClassicalStrategy, BUILTIN_STRATEGIES};

use crate::config::{positive_usize, FileConfig};
use crate::output::{write_file, Summary};
use crate::DEFAULT_SEED;

pub const DEFAULT_CLASSICAL_TOSSES: usize = 10_000;
/// Evenings up to this length report their whole payoff trajectory.
pub const TRAJECTORY_LIMIT: usize = 100;

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// One of bet-on-last, bet-less-frequent, always-0, always-1, never-bet.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Fixed results as a 0/1 string instead of a seeded fair coin.
    #[arg(long)]
    pub results: Option<String>,
    #[arg(long)]
    pub tosses: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run this many independent evenings and report statistics.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Per-toss CSV ledger (single evening only).
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// JSON summary path; stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    strategy: String,
    results: Option<String>,
    tosses: usize,
    trials: Option<usize>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Outcome {
    Evening {
        final_payoff: i64,
        bets: usize,
        wins: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        payoffs: Option<Vec<i64>>,
    },
    MonteCarlo(MonteCarloSummary),
}

pub fn strategy_by_name(name: &str) -> Result<Box<dyn ClassicalStrategy>> {
    builtin(name).ok_or_else(|| anyhow!("unknown strategy {name:?}; expected one of {}", BUILTIN_STRATEGIES.join(", ")))
}

pub fn run(args: &ClassicalArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let strategy_name = file.take("strategy", args.strategy.clone())?.unwrap_or_else(|| "bet-on-last".into());
    let results: Option<BitString> = file
        .take::<String>("results", args.results.clone())?
        .map(|s| s.parse().map_err(|e| anyhow!("results: {e}")))
        .transpose()?;
    let tosses_given = file.take("tosses", args.tosses)?;
    let seed = file.take("seed", args.seed)?.unwrap_or(DEFAULT_SEED);
    let trials = file.take("trials", args.trials)?;
    file.finish()?;

    let strategy = strategy_by_name(&strategy_name)?;
    let tosses = match (&results, tosses_given) {
        (Some(r), Some(n)) if n > r.len() => bail!("tosses ({n}) exceeds the {} given results", r.len()),
        (Some(r), n) => n.unwrap_or(r.len()),
        (None, n) => n.unwrap_or(DEFAULT_CLASSICAL_TOSSES),
    };
    positive_usize("tosses", tosses)?;
    if results.is_some() && trials.is_some() {
        bail!("--trials draws fresh coins and cannot be combined with --results");
    }

    let resolved = Resolved {
        strategy: strategy_name,
        results: results.as_ref().map(|r| r.to_string()),
        tosses,
        trials,
    };
    let outcome = if let Some(trials) = trials {
        if args.ledger.is_some() {
            bail!("--ledger records a single evening and cannot be combined with --trials");
        }
        Outcome::MonteCarlo(montecarlo_mean_payoff(strategy.as_ref(), tosses, trials, seed)?)
    } else {
        let ledger = match &results {
            // The tail is never reached: `tosses` is at most the given length.
            Some(r) => play(strategy.as_ref(), &mut Eventually::new(r.clone(), Bit::Zero), tosses)?,
            None => play(strategy.as_ref(), &mut CoinTosses::from_seed(seed), tosses)?,
        };
        if let Some(path) = &args.ledger {
            write_file(path, &ledger.to_csv())?;
        }
        let bets = ledger.records.iter().filter(|r| r.decision.is_bet()).count();
        let wins = ledger
            .records
            .iter()
            .filter(|r| r.decision.bet() == Some(&r.result))
            .count();
        Outcome::Evening {
            final_payoff: ledger.final_payoff(),
            bets,
            wins,
            payoffs: (tosses <= TRAJECTORY_LIMIT).then(|| ledger.payoffs()),
        }
    };
    let seed_echo = results.is_none().then_some(seed);
    Summary::new("classical", seed_echo, &resolved, outcome).emit(args.summary.as_deref())
}
