use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::qmatrix::{CMatrix, QuantumPrefix};
use crate::qmetrics::{DensityMatrix, PureState};
use crate::strategy::Wager;

/// First kind: bets on a pure qubit state given the states drawn so far.
pub trait StateStrategy: Send + Sync {
    fn name(&self) -> &str;

    fn decide(&self, history: &[PureState]) -> Wager<PureState>;
}

/// Second kind: bets on a density matrix given the matrices drawn so far.
pub trait DensityStrategy: Send + Sync {
    fn name(&self) -> &str;

    fn decide(&self, history: &[DensityMatrix]) -> Wager<DensityMatrix>;
}

/// Third kind: bets on a 2x2 matrix given the coin prefix. Beyond the dense
/// cap the prefix carries streaming functionals only.
pub trait AlgebraicStrategy: Send + Sync {
    fn name(&self) -> &str;

    fn decide(&self, prefix: &QuantumPrefix) -> Wager<CMatrix>;

    /// Natural log of the functional behind the decision, if any.
    fn log_decision_value(&self, _prefix: &QuantumPrefix) -> Option<f64> {
        None
    }
}

/// Never bets, in every kind of casino.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuantumNeverBet;

impl StateStrategy for QuantumNeverBet {
    fn name(&self) -> &str {
        "never-bet"
    }

    fn decide(&self, _: &[PureState]) -> Wager<PureState> {
        Wager::Pass
    }
}

impl DensityStrategy for QuantumNeverBet {
    fn name(&self) -> &str {
        "never-bet"
    }

    fn decide(&self, _: &[DensityMatrix]) -> Wager<DensityMatrix> {
        Wager::Pass
    }
}

impl AlgebraicStrategy for QuantumNeverBet {
    fn name(&self) -> &str {
        "never-bet"
    }

    fn decide(&self, _: &QuantumPrefix) -> Wager<CMatrix> {
        Wager::Pass
    }
}

/// Bets the same value on every toss, including the first.
#[derive(Clone, Debug)]
pub struct ConstantBet<T>(pub T);

impl StateStrategy for ConstantBet<PureState> {
    fn name(&self) -> &str {
        "constant-bet"
    }

    fn decide(&self, _: &[PureState]) -> Wager<PureState> {
        Wager::Bet(self.0.clone())
    }
}

impl DensityStrategy for ConstantBet<DensityMatrix> {
    fn name(&self) -> &str {
        "constant-bet"
    }

    fn decide(&self, _: &[DensityMatrix]) -> Wager<DensityMatrix> {
        Wager::Bet(self.0.clone())
    }
}

impl AlgebraicStrategy for ConstantBet<CMatrix> {
    fn name(&self) -> &str {
        "constant-bet"
    }

    fn decide(&self, _: &QuantumPrefix) -> Wager<CMatrix> {
        Wager::Bet(self.0.clone())
    }
}

/// How the Pauli strategy scales `Tr(A^dagger A)` of the length-`n` prefix
/// `A` before comparing it with its threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceNormalization {
    /// `Tr / 2^n` against 1.
    #[default]
    Normalized,
    /// `Tr` against `2^n`.
    Plain,
    /// `Tr / n` against `2^n`.
    PerFactor,
}

/// Bets on a Pauli matrix chosen by the size of the prefix's trace
/// functional: no bet on the empty prefix, `sigma_x` when the functional
/// vanishes, `sigma_y` when it is below its threshold, `sigma_z` otherwise.
///
/// Comparisons happen in log domain, so arbitrarily long prefixes are fine.
#[derive(Clone, Copy, Debug, Default)]
pub struct PauliStrategy {
    pub mode: TraceNormalization,
}

impl PauliStrategy {
    pub fn new(mode: TraceNormalization) -> Self {
        Self { mode }
    }

    /// `ln` of the threshold the functional is compared with.
    pub fn log_threshold(&self, n: usize) -> f64 {
        match self.mode {
            TraceNormalization::Normalized => 0.0,
            TraceNormalization::Plain | TraceNormalization::PerFactor => n as f64 * LN_2,
        }
    }

    fn log_functional(&self, prefix: &QuantumPrefix) -> Option<f64> {
        if prefix.is_empty() {
            return None;
        }
        let n = prefix.len() as f64;
        let log_tr = prefix.log_trace_gram();
        Some(match self.mode {
            TraceNormalization::Normalized => log_tr - n * LN_2,
            TraceNormalization::Plain => log_tr,
            TraceNormalization::PerFactor => log_tr - n.ln(),
        })
    }
}

impl AlgebraicStrategy for PauliStrategy {
    fn name(&self) -> &str {
        "pauli"
    }

    fn decide(&self, prefix: &QuantumPrefix) -> Wager<CMatrix> {
        match self.log_functional(prefix) {
            None => Wager::Pass,
            Some(v) if v == f64::NEG_INFINITY => Wager::Bet(CMatrix::pauli_x()),
            Some(v) if v < self.log_threshold(prefix.len()) => Wager::Bet(CMatrix::pauli_y()),
            Some(_) => Wager::Bet(CMatrix::pauli_z()),
        }
    }

    fn log_decision_value(&self, prefix: &QuantumPrefix) -> Option<f64> {
        self.log_functional(prefix)
    }
}
