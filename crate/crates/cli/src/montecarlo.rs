//! `casino montecarlo`: payoff statistics over many independent evenings,
//! optionally at several evening lengths.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::Args;
use serde::Serialize;

use casino_core::classical_casino::{final_payoffs, summarize, MonteCarloSummary};
use casino_core::qcasino::{lucky_trend, montecarlo_quantum};

use crate::classical::strategy_by_name;
use crate::config::{positive_usize, FileConfig};
use crate::output::{write_file, Summary};
use crate::quantum::{QuantumFlags, Resolved as QuantumResolved};
use crate::DEFAULT_SEED;

pub const DEFAULT_MC_TOSSES: usize = 100;
pub const DEFAULT_MC_TRIALS: usize = 1_000;

#[derive(Args, Debug)]
pub struct MonteCarloArgs {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// classical, 1, 2 or 3.
    #[arg(long)]
    pub kind: Option<String>,
    #[command(flatten)]
    pub flags: QuantumFlags,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated evening lengths; statistics are reported at each.
    #[arg(long)]
    pub checkpoints: Option<String>,
    /// CSV with one row per checkpoint.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON summary path; stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn parse_checkpoints(s: &str) -> Result<Vec<usize>> {
    let mut points = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| anyhow!("checkpoint {p:?}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    points.sort_unstable();
    points.dedup();
    if points.first().is_none_or(|&p| p == 0) {
        bail!("checkpoints must be positive");
    }
    Ok(points)
}

#[derive(Debug, Serialize)]
struct ClassicalEcho {
    kind: &'static str,
    strategy: String,
    tosses: usize,
    trials: usize,
    checkpoints: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
struct QuantumEcho<'a> {
    #[serde(flatten)]
    settings: &'a QuantumResolved,
    trials: usize,
    checkpoints: Option<Vec<usize>>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Outcome {
    Single(MonteCarloSummary),
    Trend(Vec<MonteCarloSummary>),
}

fn trend_csv(rows: &[MonteCarloSummary]) -> String {
    let mut out = String::from("n_tosses,trials,mean,stderr,lucky_fraction\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.n_tosses, r.trials, r.mean, r.stderr, r.lucky_fraction)
            .expect("writing to a String cannot fail");
    }
    out
}

pub fn run(args: &MonteCarloArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let kind = file.take("kind", args.kind.clone())?.unwrap_or_else(|| "classical".into());
    let trials = file.take("trials", args.trials)?.unwrap_or(DEFAULT_MC_TRIALS);
    if trials < 2 {
        bail!("trials must be at least 2");
    }
    let checkpoints = file
        .take::<String>("checkpoints", args.checkpoints.clone())?
        .map(|s| parse_checkpoints(&s))
        .transpose()?;
    // With checkpoints the evening length defaults to the longest one.
    let default_tosses = checkpoints
        .as_ref()
        .and_then(|c| c.last().copied())
        .unwrap_or(DEFAULT_MC_TOSSES);
    if args.csv.is_some() && checkpoints.is_none() {
        bail!("--csv writes the checkpoint trend and needs --checkpoints");
    }

    let summary_path = args.summary.as_deref();
    if kind == "classical" {
        let name = file
            .take("strategy", args.flags.strategy.clone())?
            .unwrap_or_else(|| "bet-on-last".into());
        let tosses = positive_usize("tosses", file.take("tosses", args.flags.tosses)?.unwrap_or(default_tosses))?;
        let seed = file.take("seed", args.flags.seed)?.unwrap_or(DEFAULT_SEED);
        file.finish()?;
        let quantum_only = [
            args.flags.bet.is_some(),
            args.flags.epsilon.is_some(),
            args.flags.edge.is_some(),
            args.flags.metric.is_some(),
            args.flags.coin_distance.is_some(),
            args.flags.mode.is_some(),
            args.flags.dense_cap.is_some(),
        ];
        if quantum_only.contains(&true) {
            bail!("quantum flags need --kind 1, 2 or 3");
        }
        let strategy = strategy_by_name(&name)?;
        let outcome = match &checkpoints {
            None => Outcome::Single(summarize(&final_payoffs(strategy.as_ref(), tosses, trials, seed), tosses)),
            Some(points) => {
                if points.iter().any(|&p| p > tosses) {
                    bail!("checkpoints must not exceed tosses ({tosses})");
                }
                // Trial t replays the same coin at every length, so each
                // checkpoint is a prefix of the same evenings.
                Outcome::Trend(
                    points
                        .iter()
                        .map(|&n| summarize(&final_payoffs(strategy.as_ref(), n, trials, seed), n))
                        .collect(),
                )
            }
        };
        if let (Some(path), Outcome::Trend(rows)) = (&args.csv, &outcome) {
            write_file(path, &trend_csv(rows))?;
        }
        let echo = ClassicalEcho {
            kind: "classical",
            strategy: name,
            tosses,
            trials,
            checkpoints,
        };
        return Summary::new("montecarlo", Some(seed), &echo, outcome).emit(summary_path);
    }

    let k: u8 = kind
        .parse()
        .map_err(|_| anyhow!("kind must be classical, 1, 2 or 3, got {kind:?}"))?;
    // Monte Carlo evenings never look at the dense product unless asked.
    let (resolved, seed) = QuantumResolved::resolve(k, &args.flags, &mut file, default_tosses, 0)?;
    file.finish()?;
    let cfg = resolved.casino_config(seed)?;
    let owned = resolved.build_strategy()?;
    let outcome = match &checkpoints {
        None => Outcome::Single(montecarlo_quantum(owned.as_any(), &cfg, trials)?),
        Some(points) => {
            if points.iter().any(|&p| p > resolved.tosses) {
                bail!("checkpoints must not exceed tosses ({})", resolved.tosses);
            }
            Outcome::Trend(lucky_trend(owned.as_any(), &cfg, trials, points)?)
        }
    };
    if let (Some(path), Outcome::Trend(rows)) = (&args.csv, &outcome) {
        write_file(path, &trend_csv(rows))?;
    }
    let echo = QuantumEcho {
        settings: &resolved,
        trials,
        checkpoints,
    };
    Summary::new("montecarlo", Some(seed), &echo, outcome).emit(summary_path)
}
