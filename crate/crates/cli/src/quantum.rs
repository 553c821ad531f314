//! `casino quantum`: one evening in a casino of the first, second or third
//! kind, on sampled results or on coins replayed from a fixture file.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use casino_core::qcasino::{
    run_kind3_with, AnyStrategy, CasinoKind, CoinDistance, ConstantBet, PauliStrategy, QuantumCasinoConfig,
    QuantumLedger, QuantumNeverBet, StateMetric, TraceNormalization,
};
use casino_core::qmatrix::json::{parse_coins, parse_matrix};
use casino_core::qmatrix::{CMatrix, DENSE_CAP};
use casino_core::qmetrics::{bloch_to_state, DensityMatrix, PureState};
use casino_core::Complex64;

use crate::classical::TRAJECTORY_LIMIT;
use crate::config::{positive_f64, positive_usize, FileConfig};
use crate::output::{write_file, Summary};
use crate::DEFAULT_SEED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    /// Pauli matrices by trace size (third kind only).
    Pauli,
    /// The same `--bet` on every toss.
    Constant,
    NeverBet,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricName {
    Trace,
    Angle,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinDistanceName {
    /// Largest singular value of the difference.
    OperatorNorm,
    /// Largest eigenvalue modulus of the difference.
    SpectralRadius,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Normalized,
    Plain,
    PerFactor,
}

impl From<MetricName> for StateMetric {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::Trace => StateMetric::Trace,
            MetricName::Angle => StateMetric::Angle,
        }
    }
}

impl From<CoinDistanceName> for CoinDistance {
    fn from(c: CoinDistanceName) -> Self {
        match c {
            CoinDistanceName::OperatorNorm => CoinDistance::OperatorNorm,
            CoinDistanceName::SpectralRadius => CoinDistance::SpectralRadius,
        }
    }
}

impl From<ModeName> for TraceNormalization {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Normalized => TraceNormalization::Normalized,
            ModeName::Plain => TraceNormalization::Plain,
            ModeName::PerFactor => TraceNormalization::PerFactor,
        }
    }
}

/// Flags shared by `quantum` and the quantum branch of `montecarlo`.
#[derive(Args, Debug, Default)]
pub struct QuantumFlags {
    /// pauli, constant or never-bet (quantum); classical names for
    /// classical Monte Carlo.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Value for the constant strategy. States: zero, one, plus, minus,
    /// plus-i, minus-i; mixed states also maximally-mixed and bloch:X,Y,Z;
    /// coins: sigma_x, sigma_y, sigma_z, identity or a JSON matrix.
    #[arg(long, allow_hyphen_values = true)]
    pub bet: Option<String>,
    #[arg(long)]
    pub tosses: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Winning radius.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Side of the square holding the sampled coin entries.
    #[arg(long, allow_negative_numbers = true)]
    pub edge: Option<f64>,
    /// Distance between states (first and second kind).
    #[arg(long, value_enum)]
    pub metric: Option<MetricName>,
    /// Distance between coins (third kind).
    #[arg(long, value_enum)]
    pub coin_distance: Option<CoinDistanceName>,
    /// Trace normalization of the Pauli strategy.
    #[arg(long, value_enum)]
    pub mode: Option<ModeName>,
    /// Prefix length up to which the dense product is kept.
    #[arg(long)]
    pub dense_cap: Option<usize>,
}

#[derive(Args, Debug)]
pub struct QuantumArgs {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Casino kind: 1 pure states, 2 density matrices, 3 coins.
    #[arg(long)]
    pub kind: Option<u8>,
    #[command(flatten)]
    pub flags: QuantumFlags,
    /// JSON coin list to replay instead of sampling (third kind).
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Per-toss CSV ledger.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// JSON summary path; stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

/// Fully resolved quantum settings, echoed in summaries.
#[derive(Debug, Serialize)]
pub struct Resolved {
    pub kind: u8,
    pub strategy: StrategyName,
    pub bet: Option<String>,
    pub mode: ModeName,
    pub tosses: usize,
    pub epsilon: f64,
    pub edge: f64,
    pub metric: MetricName,
    pub coin_distance: CoinDistanceName,
    pub dense_cap: usize,
}

impl Resolved {
    /// Reads everything in [`QuantumFlags`] from flags, then file, then
    /// defaults. `default_tosses` and `default_cap` differ per command.
    pub fn resolve(
        kind: u8,
        flags: &QuantumFlags,
        file: &mut FileConfig,
        default_tosses: usize,
        default_cap: usize,
    ) -> Result<(Self, u64)> {
        let casino = CasinoKind::from_number(kind)?;
        let defaults = QuantumCasinoConfig::new(casino);
        let named = file
            .take::<String>("strategy", flags.strategy.clone())?
            .map(|s| StrategyName::from_str(&s, false).map_err(|e| anyhow!("strategy: {e}")))
            .transpose()?;
        let strategy = named.unwrap_or(match casino {
            CasinoKind::Third => StrategyName::Pauli,
            _ => StrategyName::Constant,
        });
        let bet = file.take("bet", flags.bet.clone())?;
        let resolved = Self {
            kind,
            strategy,
            bet: match strategy {
                StrategyName::Constant => Some(bet.unwrap_or_else(|| default_bet(casino).into())),
                _ if bet.is_some() => bail!("--bet only applies to the constant strategy"),
                _ => None,
            },
            mode: file.take_enum("mode", flags.mode)?.unwrap_or(ModeName::Normalized),
            tosses: positive_usize("tosses", file.take("tosses", flags.tosses)?.unwrap_or(default_tosses))?,
            epsilon: positive_f64("epsilon", file.take("epsilon", flags.epsilon)?.unwrap_or(defaults.epsilon))?,
            edge: positive_f64("edge", file.take("edge", flags.edge)?.unwrap_or(defaults.edge))?,
            metric: file.take_enum("metric", flags.metric)?.unwrap_or(MetricName::Trace),
            coin_distance: file
                .take_enum("coin_distance", flags.coin_distance)?
                .unwrap_or(CoinDistanceName::OperatorNorm),
            dense_cap: file.take("dense_cap", flags.dense_cap)?.unwrap_or(default_cap),
        };
        if resolved.dense_cap > DENSE_CAP {
            bail!("dense-cap must be at most {DENSE_CAP}");
        }
        if strategy == StrategyName::Pauli && casino != CasinoKind::Third {
            bail!("the pauli strategy plays in the third kind of casino only");
        }
        let seed = file.take("seed", flags.seed)?.unwrap_or(DEFAULT_SEED);
        Ok((resolved, seed))
    }

    pub fn casino_config(&self, seed: u64) -> Result<QuantumCasinoConfig> {
        let cfg = QuantumCasinoConfig {
            kind: CasinoKind::from_number(self.kind)?,
            epsilon: self.epsilon,
            n_tosses: self.tosses,
            edge: self.edge,
            metric: self.metric.into(),
            coin_distance: self.coin_distance.into(),
            dense_cap: self.dense_cap,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn build_strategy(&self) -> Result<OwnedStrategy> {
        let kind = CasinoKind::from_number(self.kind)?;
        Ok(match self.strategy {
            StrategyName::NeverBet => OwnedStrategy::Never(QuantumNeverBet, kind),
            StrategyName::Pauli => OwnedStrategy::Pauli(PauliStrategy::new(self.mode.into())),
            StrategyName::Constant => {
                let bet = self.bet.as_deref().expect("constant strategy has a bet");
                match kind {
                    CasinoKind::First => OwnedStrategy::Pure(ConstantBet(parse_pure(bet)?)),
                    CasinoKind::Second => OwnedStrategy::Mixed(ConstantBet(parse_mixed(bet)?)),
                    CasinoKind::Third => OwnedStrategy::Coin(ConstantBet(parse_coin(bet)?)),
                }
            }
        })
    }
}

fn default_bet(kind: CasinoKind) -> &'static str {
    match kind {
        CasinoKind::First => "zero",
        CasinoKind::Second => "maximally-mixed",
        CasinoKind::Third => "sigma_z",
    }
}

fn parse_pure(name: &str) -> Result<PureState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let amps = match name {
        "zero" => vec![c(1.0, 0.0), c(0.0, 0.0)],
        "one" => vec![c(0.0, 0.0), c(1.0, 0.0)],
        "plus" => vec![c(h, 0.0), c(h, 0.0)],
        "minus" => vec![c(h, 0.0), c(-h, 0.0)],
        "plus-i" => vec![c(h, 0.0), c(0.0, h)],
        "minus-i" => vec![c(h, 0.0), c(0.0, -h)],
        _ => bail!("unknown state {name:?}; expected zero, one, plus, minus, plus-i or minus-i"),
    };
    Ok(PureState::new(amps)?)
}

fn parse_mixed(name: &str) -> Result<DensityMatrix> {
    if name == "maximally-mixed" {
        return Ok(DensityMatrix::maximally_mixed(2));
    }
    if let Some(v) = name.strip_prefix("bloch:") {
        let r: Vec<f64> = v
            .split([',', ';'])
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| anyhow!("bloch vector {v:?}: {e}"))?;
        let [x, y, z] = r[..] else {
            bail!("bloch vector needs three components, got {}", r.len());
        };
        return Ok(bloch_to_state([x, y, z])?);
    }
    Ok(parse_pure(name)?.density())
}

fn parse_coin(name: &str) -> Result<CMatrix> {
    Ok(match name {
        "sigma_x" => CMatrix::pauli_x(),
        "sigma_y" => CMatrix::pauli_y(),
        "sigma_z" => CMatrix::pauli_z(),
        "identity" => CMatrix::identity(2),
        s if s.trim_start().starts_with('[') => {
            let m = parse_matrix(s)?;
            if m.shape() != (2, 2) {
                bail!("coin bet must be 2x2");
            }
            m
        }
        _ => bail!("unknown coin {name:?}; expected sigma_x, sigma_y, sigma_z, identity or a JSON matrix"),
    })
}

pub enum OwnedStrategy {
    Never(QuantumNeverBet, CasinoKind),
    Pauli(PauliStrategy),
    Pure(ConstantBet<PureState>),
    Mixed(ConstantBet<DensityMatrix>),
    Coin(ConstantBet<CMatrix>),
}

impl OwnedStrategy {
    pub fn as_any(&self) -> AnyStrategy<'_> {
        match self {
            OwnedStrategy::Never(s, CasinoKind::First) => AnyStrategy::First(s),
            OwnedStrategy::Never(s, CasinoKind::Second) => AnyStrategy::Second(s),
            OwnedStrategy::Never(s, CasinoKind::Third) => AnyStrategy::Third(s),
            OwnedStrategy::Pauli(s) => AnyStrategy::Third(s),
            OwnedStrategy::Pure(s) => AnyStrategy::First(s),
            OwnedStrategy::Mixed(s) => AnyStrategy::Second(s),
            OwnedStrategy::Coin(s) => AnyStrategy::Third(s),
        }
    }
}

pub fn load_fixture_coins(path: &Path) -> Result<Vec<CMatrix>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_coins(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct Outcome {
    final_payoff: i64,
    bets: usize,
    wins: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    payoffs: Option<Vec<i64>>,
    /// Pauli functional per toss (null where undefined).
    #[serde(skip_serializing_if = "Option::is_none")]
    decision_values: Option<Vec<Option<f64>>>,
}

#[derive(Serialize)]
struct Echo<'a> {
    #[serde(flatten)]
    settings: &'a Resolved,
    fixtures: Option<String>,
}

pub fn run(args: &QuantumArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let kind = file.take("kind", args.kind)?.unwrap_or(3);
    let fixtures: Option<PathBuf> = file.take("fixtures", args.fixtures.clone())?;
    let coins = fixtures.as_deref().map(load_fixture_coins).transpose()?;
    let default_tosses = coins.as_ref().map_or(casino_core::qcasino::DEFAULT_QUANTUM_TOSSES, Vec::len);
    let (resolved, seed) = Resolved::resolve(kind, &args.flags, &mut file, default_tosses, DENSE_CAP)?;
    file.finish()?;

    let coins = match coins {
        Some(_) if kind != 3 => bail!("--fixtures replays coins and needs --kind 3"),
        Some(c) if resolved.tosses > c.len() => {
            bail!("tosses ({}) exceeds the {} coins in the fixture", resolved.tosses, c.len())
        }
        Some(mut c) => {
            c.truncate(resolved.tosses);
            Some(c)
        }
        None => None,
    };
    let cfg = resolved.casino_config(seed)?;
    let owned = resolved.build_strategy()?;
    let strategy = owned.as_any();

    let keep_ledger = args.ledger.is_some();
    let keep_trajectory = resolved.tosses <= TRAJECTORY_LIMIT;
    let mut ledger = QuantumLedger::default();
    let mut payoffs = Vec::new();
    let mut decisions = Vec::new();
    let sink = |r: casino_core::qcasino::QuantumTossRecord| {
        if keep_trajectory {
            payoffs.push(r.payoff_after);
            decisions.push(r.decision_value());
        }
        if keep_ledger {
            ledger.records.push(r);
        }
    };
    let stats = match (&coins, strategy) {
        (Some(c), AnyStrategy::Third(s)) => {
            let mut it = c.iter();
            run_kind3_with(s, &cfg, || Ok(it.next().expect("one coin per toss").clone()), sink)?
        }
        (_, s) => s.run(&cfg, sink)?,
    };
    if let Some(path) = &args.ledger {
        write_file(path, &ledger.to_csv())?;
    }
    let outcome = Outcome {
        final_payoff: stats.final_payoff,
        bets: stats.bets,
        wins: stats.wins,
        decision_values: (keep_trajectory && resolved.strategy == StrategyName::Pauli).then(|| decisions.clone()),
        payoffs: keep_trajectory.then_some(payoffs),
    };
    let echo = Echo {
        settings: &resolved,
        fixtures: fixtures.map(|p| p.display().to_string()),
    };
    let seed_echo = coins.is_none().then_some(seed);
    Summary::new("quantum", seed_echo, &echo, outcome).emit(args.summary.as_deref())
}
