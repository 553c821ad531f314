//! The three kinds of quantum casino.
//!
//! - first kind: the house draws a Haar-random pure qubit state, the gambler
//!   bets on a pure state and wins when the two are within `epsilon`;
//! - second kind: the same with Bloch-ball-uniform density matrices;
//! - third kind: the house throws an algebraic coin (a random 2x2 complex
//!   matrix), the gambler bets on a matrix and wins when the operator-norm
//!   distance is at most `epsilon`.
//!
//! Payoffs follow the classical rule: +1 for a win, -1 for a loss, 0 when
//! the strategy declines to bet.

mod strategies;

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical_casino::{summarize, MonteCarloSummary};
use crate::error::{Error, Result};
use crate::qmatrix::{op_norm, spectral_radius_2x2, CMatrix, NormOrder, QuantumPrefix, DENSE_CAP};
use crate::qmetrics::{angle_distance, state_to_bloch, trace_distance, DensityMatrix, PureState, STATE_TOL};
use crate::sampling::{derive_seed, SeededRng};
use crate::strategy::Wager;

pub use strategies::{
    AlgebraicStrategy, ConstantBet, DensityStrategy, PauliStrategy, QuantumNeverBet, StateStrategy,
    TraceNormalization,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CasinoKind {
    First,
    Second,
    Third,
}

impl CasinoKind {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            3 => Ok(Self::Third),
            _ => Err(Error::InvalidParameter(format!("casino kind must be 1, 2 or 3, got {k}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Self::First => 1,
            Self::Second => 2,
            Self::Third => 3,
        }
    }
}

/// Distance between the drawn state and the bet (kinds 1 and 2).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateMetric {
    /// Trace distance; for pure states `sqrt(1 - |<psi|alpha>|^2)`.
    #[default]
    Trace,
    /// `arccos F`.
    Angle,
}

/// Size of `a_n - b` used by the third-kind win rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinDistance {
    /// Largest singular value.
    #[default]
    OperatorNorm,
    /// Largest eigenvalue modulus.
    SpectralRadius,
}

pub const DEFAULT_EPSILON_KIND3: f64 = 10.0;
pub const DEFAULT_EPSILON_STATES: f64 = 0.25;
pub const DEFAULT_EDGE: f64 = 10.0;
pub const DEFAULT_QUANTUM_TOSSES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumCasinoConfig {
    pub kind: CasinoKind,
    pub epsilon: f64,
    pub n_tosses: usize,
    /// Side of the origin-centred square holding the coin entries (kind 3).
    pub edge: f64,
    pub metric: StateMetric,
    pub coin_distance: CoinDistance,
    /// Prefix length up to which the dense tensor product is materialized.
    pub dense_cap: usize,
    pub seed: u64,
}

impl QuantumCasinoConfig {
    /// Defaults for `kind`: `epsilon` 10 for coins, 0.25 for states.
    pub fn new(kind: CasinoKind) -> Self {
        Self {
            kind,
            epsilon: match kind {
                CasinoKind::Third => DEFAULT_EPSILON_KIND3,
                _ => DEFAULT_EPSILON_STATES,
            },
            n_tosses: DEFAULT_QUANTUM_TOSSES,
            edge: DEFAULT_EDGE,
            metric: StateMetric::Trace,
            coin_distance: CoinDistance::OperatorNorm,
            dense_cap: DENSE_CAP,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.edge > 0.0 && self.edge.is_finite()) {
            return Err(Error::InvalidParameter(format!("edge must be positive, got {}", self.edge)));
        }
        if self.n_tosses == 0 {
            return Err(Error::InvalidParameter("n_tosses must be positive".into()));
        }
        if self.dense_cap > DENSE_CAP {
            return Err(Error::InvalidParameter(format!(
                "dense_cap must be at most {DENSE_CAP}, got {}",
                self.dense_cap
            )));
        }
        Ok(())
    }

    fn expect_kind(&self, kind: CasinoKind) -> Result<()> {
        self.validate()?;
        if self.kind != kind {
            return Err(Error::InvalidParameter(format!(
                "configuration is for kind {}, engine is kind {}",
                self.kind.number(),
                kind.number()
            )));
        }
        Ok(())
    }
}

/// A drawn result or a placed bet.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumValue {
    Pure(PureState),
    Mixed(DensityMatrix),
    Coin(CMatrix),
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn pauli_label(m: &CMatrix) -> Option<&'static str> {
    [
        (CMatrix::pauli_x(), "sigma_x"),
        (CMatrix::pauli_y(), "sigma_y"),
        (CMatrix::pauli_z(), "sigma_z"),
    ]
    .into_iter()
    .find(|(p, _)| p == m)
    .map(|(_, l)| l)
}

impl fmt::Display for QuantumValue {
    /// Comma-free so that it can sit in a CSV cell.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantumValue::Pure(psi) => {
                let parts: Vec<String> = psi.amplitudes().iter().map(|&z| fmt_complex(z)).collect();
                write!(f, "({})", parts.join(";"))
            }
            QuantumValue::Mixed(rho) => match state_to_bloch(rho) {
                Ok([x, y, z]) => write!(f, "bloch({x:.6};{y:.6};{z:.6})"),
                Err(_) => write!(f, "density({}x{})", rho.dim(), rho.dim()),
            },
            QuantumValue::Coin(m) => match pauli_label(m) {
                Some(l) => f.write_str(l),
                None => {
                    let parts: Vec<String> = m.data().iter().map(|&z| fmt_complex(z)).collect();
                    write!(f, "[{}]", parts.join(";"))
                }
            },
        }
    }
}

/// One quantum toss. `distance` and `won` are present only when a bet was
/// placed; `log_decision_value` only for strategies exposing a functional.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumTossRecord {
    pub index: usize,
    pub result: QuantumValue,
    pub bet: Wager<QuantumValue>,
    pub distance: Option<f64>,
    pub won: Option<bool>,
    pub payoff_after: i64,
    pub log_decision_value: Option<f64>,
}

impl QuantumTossRecord {
    pub fn decision_value(&self) -> Option<f64> {
        self.log_decision_value.map(f64::exp)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuantumLedger {
    pub records: Vec<QuantumTossRecord>,
}

fn fmt_value(v: f64) -> String {
    if v.is_finite() && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl QuantumLedger {
    pub fn final_payoff(&self) -> i64 {
        self.records.last().map_or(0, |r| r.payoff_after)
    }

    pub fn payoffs(&self) -> Vec<i64> {
        self.records.iter().map(|r| r.payoff_after).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The classical columns plus `distance`, `decision_value` and its log.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("index,result,bet,distance,payoff_after,decision_value,log_decision_value\n");
        for r in &self.records {
            let bet = match &r.bet {
                Wager::Bet(b) => b.to_string(),
                Wager::Pass => "no-bet".to_string(),
            };
            let distance = r.distance.map(fmt_value).unwrap_or_default();
            let value = r.decision_value().map(fmt_value).unwrap_or_default();
            let log_value = r.log_decision_value.map(fmt_value).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.index, r.result, bet, distance, r.payoff_after, value, log_value
            )
            .expect("writing to a String cannot fail");
        }
        out
    }
}

/// Aggregate outcome of one engine run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub final_payoff: i64,
    pub bets: usize,
    pub wins: usize,
    /// Heap bytes held by the prefix's dense product at the end (kind 3).
    pub prefix_dense_bytes: usize,
}

struct Tally {
    payoff: i64,
    bets: usize,
    wins: usize,
}

impl Tally {
    fn new() -> Self {
        Self { payoff: 0, bets: 0, wins: 0 }
    }

    fn settle(&mut self, distance: Option<f64>, epsilon: f64) -> Option<bool> {
        let won = distance.map(|d| d <= epsilon);
        if let Some(w) = won {
            self.bets += 1;
            self.wins += usize::from(w);
            self.payoff += if w { 1 } else { -1 };
        }
        won
    }
}

/// Distance between pure qubit states under `metric`.
pub fn pure_distance(a: &PureState, b: &PureState, metric: StateMetric) -> Result<f64> {
    let overlap = a.inner(b)?.norm().min(1.0);
    Ok(match metric {
        StateMetric::Trace => (1.0 - overlap * overlap).max(0.0).sqrt(),
        StateMetric::Angle => overlap.acos(),
    })
}

pub fn mixed_distance(a: &DensityMatrix, b: &DensityMatrix, metric: StateMetric) -> Result<f64> {
    match metric {
        StateMetric::Trace => trace_distance(a, b),
        StateMetric::Angle => angle_distance(a, b),
    }
}

/// `||coin - bet||` under `mode`.
pub fn coin_distance(coin: &CMatrix, bet: &CMatrix, mode: CoinDistance) -> Result<f64> {
    let diff = coin.try_sub(bet)?;
    match mode {
        CoinDistance::OperatorNorm => op_norm(&diff, NormOrder::Infinity),
        CoinDistance::SpectralRadius => spectral_radius_2x2(&diff),
    }
}

fn check_pure_bet(bet: &PureState) -> Result<()> {
    let n2 = bet.norm_sqr();
    if bet.dim() != 2 || (n2 - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidBet(format!(
            "pure bet must be a unit qubit vector (dimension {}, squared norm {n2})",
            bet.dim()
        )));
    }
    Ok(())
}

fn check_mixed_bet(bet: &DensityMatrix) -> Result<()> {
    if bet.dim() != 2 {
        return Err(Error::InvalidBet(format!("density bet must be 2x2, got dimension {}", bet.dim())));
    }
    DensityMatrix::new(bet.mat().clone())
        .map(|_| ())
        .map_err(|e| Error::InvalidBet(e.to_string()))
}

fn check_coin_bet(bet: &CMatrix) -> Result<()> {
    if bet.shape() != (2, 2) || bet.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidBet(format!(
            "coin bet must be a finite 2x2 matrix, got {}x{}",
            bet.rows(),
            bet.cols()
        )));
    }
    Ok(())
}

/// First-kind engine; every toss is passed to `sink`.
pub fn run_kind1(
    strategy: &dyn StateStrategy,
    config: &QuantumCasinoConfig,
    mut sink: impl FnMut(QuantumTossRecord),
) -> Result<RunStats> {
    config.expect_kind(CasinoKind::First)?;
    let mut rng = SeededRng::new(config.seed);
    let mut history: Vec<PureState> = Vec::with_capacity(config.n_tosses);
    let mut tally = Tally::new();
    for index in 1..=config.n_tosses {
        let decision = strategy.decide(&history);
        let result = rng.sample_pure_state();
        let distance = match &decision {
            Wager::Bet(b) => {
                check_pure_bet(b)?;
                Some(pure_distance(&result, b, config.metric)?)
            }
            Wager::Pass => None,
        };
        let won = tally.settle(distance, config.epsilon);
        sink(QuantumTossRecord {
            index,
            result: QuantumValue::Pure(result.clone()),
            bet: decision.map(QuantumValue::Pure),
            distance,
            won,
            payoff_after: tally.payoff,
            log_decision_value: None,
        });
        history.push(result);
    }
    Ok(RunStats {
        final_payoff: tally.payoff,
        bets: tally.bets,
        wins: tally.wins,
        prefix_dense_bytes: 0,
    })
}

/// Second-kind engine.
pub fn run_kind2(
    strategy: &dyn DensityStrategy,
    config: &QuantumCasinoConfig,
    mut sink: impl FnMut(QuantumTossRecord),
) -> Result<RunStats> {
    config.expect_kind(CasinoKind::Second)?;
    let mut rng = SeededRng::new(config.seed);
    let mut history: Vec<DensityMatrix> = Vec::with_capacity(config.n_tosses);
    let mut tally = Tally::new();
    for index in 1..=config.n_tosses {
        let decision = strategy.decide(&history);
        let result = rng.sample_density_matrix();
        let distance = match &decision {
            Wager::Bet(b) => {
                check_mixed_bet(b)?;
                Some(mixed_distance(&result, b, config.metric)?)
            }
            Wager::Pass => None,
        };
        let won = tally.settle(distance, config.epsilon);
        sink(QuantumTossRecord {
            index,
            result: QuantumValue::Mixed(result.clone()),
            bet: decision.map(QuantumValue::Mixed),
            distance,
            won,
            payoff_after: tally.payoff,
            log_decision_value: None,
        });
        history.push(result);
    }
    Ok(RunStats {
        final_payoff: tally.payoff,
        bets: tally.bets,
        wins: tally.wins,
        prefix_dense_bytes: 0,
    })
}

/// Third-kind engine over an arbitrary coin source. The strategy sees only
/// the prefix, which drops its dense product beyond `config.dense_cap`.
pub fn run_kind3_with(
    strategy: &dyn AlgebraicStrategy,
    config: &QuantumCasinoConfig,
    mut coins: impl FnMut() -> Result<CMatrix>,
    mut sink: impl FnMut(QuantumTossRecord),
) -> Result<RunStats> {
    config.expect_kind(CasinoKind::Third)?;
    let mut prefix = QuantumPrefix::with_dense_cap(config.dense_cap);
    let mut tally = Tally::new();
    for index in 1..=config.n_tosses {
        let decision = strategy.decide(&prefix);
        let log_decision_value = strategy.log_decision_value(&prefix);
        let coin = coins()?;
        let distance = match &decision {
            Wager::Bet(b) => {
                check_coin_bet(b)?;
                Some(coin_distance(&coin, b, config.coin_distance)?)
            }
            Wager::Pass => None,
        };
        let won = tally.settle(distance, config.epsilon);
        prefix.extend(&coin)?;
        sink(QuantumTossRecord {
            index,
            result: QuantumValue::Coin(coin),
            bet: decision.map(QuantumValue::Coin),
            distance,
            won,
            payoff_after: tally.payoff,
            log_decision_value,
        });
    }
    Ok(RunStats {
        final_payoff: tally.payoff,
        bets: tally.bets,
        wins: tally.wins,
        prefix_dense_bytes: prefix.dense_heap_bytes(),
    })
}

/// Third-kind engine with coins drawn from `config.seed`.
pub fn run_kind3(
    strategy: &dyn AlgebraicStrategy,
    config: &QuantumCasinoConfig,
    sink: impl FnMut(QuantumTossRecord),
) -> Result<RunStats> {
    config.validate()?;
    let mut rng = SeededRng::new(config.seed);
    let edge = config.edge;
    run_kind3_with(strategy, config, || rng.sample_algebraic_coin(edge), sink)
}

fn collect(run: impl FnOnce(&mut dyn FnMut(QuantumTossRecord)) -> Result<RunStats>) -> Result<QuantumLedger> {
    let mut records = Vec::new();
    run(&mut |r| records.push(r))?;
    Ok(QuantumLedger { records })
}

pub fn play_kind1(strategy: &dyn StateStrategy, config: &QuantumCasinoConfig) -> Result<QuantumLedger> {
    collect(|sink| run_kind1(strategy, config, sink))
}

pub fn play_kind2(strategy: &dyn DensityStrategy, config: &QuantumCasinoConfig) -> Result<QuantumLedger> {
    collect(|sink| run_kind2(strategy, config, sink))
}

pub fn play_kind3(strategy: &dyn AlgebraicStrategy, config: &QuantumCasinoConfig) -> Result<QuantumLedger> {
    collect(|sink| run_kind3(strategy, config, sink))
}

/// Third-kind evening on a fixed list of coins (`n_tosses` is taken from
/// the list length).
pub fn play_kind3_fixed(
    strategy: &dyn AlgebraicStrategy,
    config: &QuantumCasinoConfig,
    coins: &[CMatrix],
) -> Result<QuantumLedger> {
    let config = QuantumCasinoConfig {
        n_tosses: coins.len(),
        ..config.clone()
    };
    let mut it = coins.iter();
    collect(|sink| {
        run_kind3_with(
            strategy,
            &config,
            || Ok(it.next().expect("one coin per toss").clone()),
            sink,
        )
    })
}

/// A strategy for any kind of casino.
#[derive(Clone, Copy)]
pub enum AnyStrategy<'a> {
    First(&'a dyn StateStrategy),
    Second(&'a dyn DensityStrategy),
    Third(&'a dyn AlgebraicStrategy),
}

impl AnyStrategy<'_> {
    pub fn kind(&self) -> CasinoKind {
        match self {
            AnyStrategy::First(_) => CasinoKind::First,
            AnyStrategy::Second(_) => CasinoKind::Second,
            AnyStrategy::Third(_) => CasinoKind::Third,
        }
    }

    /// Runs one evening, reporting payoffs only.
    pub fn run(&self, config: &QuantumCasinoConfig, sink: impl FnMut(QuantumTossRecord)) -> Result<RunStats> {
        match *self {
            AnyStrategy::First(s) => run_kind1(s, config, sink),
            AnyStrategy::Second(s) => run_kind2(s, config, sink),
            AnyStrategy::Third(s) => run_kind3(s, config, sink),
        }
    }
}

/// Per-trial config: trial `t` uses `derive_seed(config.seed, t)`.
fn trial_config(config: &QuantumCasinoConfig, t: u64) -> QuantumCasinoConfig {
    QuantumCasinoConfig {
        seed: derive_seed(config.seed, t),
        ..config.clone()
    }
}

/// Final-payoff statistics over independent evenings.
pub fn montecarlo_quantum(
    strategy: AnyStrategy<'_>,
    config: &QuantumCasinoConfig,
    trials: usize,
) -> Result<MonteCarloSummary> {
    if trials < 2 {
        return Err(Error::InvalidParameter("at least two trials are needed".into()));
    }
    config.validate()?;
    let payoffs = (0..trials as u64)
        .into_par_iter()
        .map(|t| strategy.run(&trial_config(config, t), |_| {}).map(|s| s.final_payoff))
        .collect::<Result<Vec<i64>>>()?;
    Ok(summarize(&payoffs, config.n_tosses))
}

/// Payoff statistics at each checkpoint `n` (sorted, within `n_tosses`)
/// from a single set of evenings of length `max(checkpoints)`.
pub fn lucky_trend(
    strategy: AnyStrategy<'_>,
    config: &QuantumCasinoConfig,
    trials: usize,
    checkpoints: &[usize],
) -> Result<Vec<MonteCarloSummary>> {
    if trials < 2 {
        return Err(Error::InvalidParameter("at least two trials are needed".into()));
    }
    let mut points = checkpoints.to_vec();
    points.sort_unstable();
    points.dedup();
    if points.first().is_none_or(|&n| n == 0) {
        return Err(Error::InvalidParameter("checkpoints must be positive".into()));
    }
    let longest = QuantumCasinoConfig {
        n_tosses: *points.last().expect("non-empty"),
        ..config.clone()
    };
    longest.validate()?;
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut at = Vec::with_capacity(points.len());
            strategy.run(&trial_config(&longest, t), |r| {
                if points.binary_search(&r.index).is_ok() {
                    at.push(r.payoff_after);
                }
            })?;
            Ok(at)
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let col: Vec<i64> = per_trial.iter().map(|row| row[k]).collect();
            summarize(&col, n)
        })
        .collect())
}

#[cfg(test)]
mod tests;
