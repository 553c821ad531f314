//! The classical coin-toss casino: a strategy plays against a bit source
//! and every toss is recorded in a payoff ledger.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{derive_seed, SeededRng};
use crate::sequences::{Bit, BitSequence, BitString, CoinTosses};
use crate::strategy::{ClassicalStrategy, Wager};

/// One row of a ledger. `payoff_after` is the cumulative payoff once this
/// toss is settled (`payoff(0) = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TossRecord {
    pub index: usize,
    pub result: Bit,
    pub decision: Wager<Bit>,
    pub payoff_after: i64,
}

/// +1 for a won bet, -1 for a lost bet, 0 when no bet was placed.
pub fn settle(decision: &Wager<Bit>, result: Bit) -> i64 {
    match decision {
        Wager::Bet(b) if *b == result => 1,
        Wager::Bet(_) => -1,
        Wager::Pass => 0,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PayoffLedger {
    pub records: Vec<TossRecord>,
}

impl PayoffLedger {
    pub fn final_payoff(&self) -> i64 {
        self.records.last().map_or(0, |r| r.payoff_after)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn results(&self) -> BitString {
        self.records.iter().map(|r| r.result).collect()
    }

    pub fn payoffs(&self) -> Vec<i64> {
        self.records.iter().map(|r| r.payoff_after).collect()
    }

    /// Columns `index,result,bet,payoff_after`; a skipped toss shows `no-bet`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,result,bet,payoff_after\n");
        for r in &self.records {
            let bet = match &r.decision {
                Wager::Bet(b) => b.to_string(),
                Wager::Pass => "no-bet".to_string(),
            };
            writeln!(out, "{},{},{},{}", r.index, r.result, bet, r.payoff_after)
                .expect("writing to a String cannot fail");
        }
        out
    }
}

/// Plays `n_tosses` rounds: the strategy sees the results so far, bets (or
/// not), then the next result is drawn from `source`.
pub fn play(
    strategy: &dyn ClassicalStrategy,
    source: &mut dyn BitSequence,
    n_tosses: usize,
) -> Result<PayoffLedger> {
    if n_tosses == 0 {
        return Err(Error::InvalidParameter("n_tosses must be positive".into()));
    }
    let mut history = Vec::with_capacity(n_tosses);
    let mut records = Vec::with_capacity(n_tosses);
    let mut payoff = 0i64;
    for index in 1..=n_tosses {
        let decision = strategy.decide(&history);
        let result = source.next_bit();
        payoff += settle(&decision, result);
        records.push(TossRecord {
            index,
            result,
            decision,
            payoff_after: payoff,
        });
        history.push(result);
    }
    Ok(PayoffLedger { records })
}

/// Final payoff only, without materializing the ledger.
pub fn final_payoff(
    strategy: &dyn ClassicalStrategy,
    source: &mut dyn BitSequence,
    n_tosses: usize,
) -> i64 {
    let mut history = Vec::with_capacity(n_tosses);
    let mut payoff = 0i64;
    for _ in 0..n_tosses {
        let decision = strategy.decide(&history);
        let result = source.next_bit();
        payoff += settle(&decision, result);
        history.push(result);
    }
    payoff
}

/// Summary of independent fair-coin evenings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub n_tosses: usize,
    pub mean: f64,
    pub stderr: f64,
    /// Fraction of trials with strictly positive final payoff.
    pub lucky_fraction: f64,
}

/// Final payoffs of `trials` fair-coin evenings. Trial `t` draws its coin
/// from `derive_seed(seed, t)`, so the output is independent of scheduling.
pub fn final_payoffs(
    strategy: &dyn ClassicalStrategy,
    n_tosses: usize,
    trials: usize,
    seed: u64,
) -> Vec<i64> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut coin = CoinTosses::new(SeededRng::new(derive_seed(seed, t)));
            final_payoff(strategy, &mut coin, n_tosses)
        })
        .collect()
}

/// Sample mean, standard error and lucky fraction of a list of payoffs.
pub fn summarize(payoffs: &[i64], n_tosses: usize) -> MonteCarloSummary {
    let n = payoffs.len() as f64;
    let mean = payoffs.iter().map(|&p| p as f64).sum::<f64>() / n;
    let var = if payoffs.len() > 1 {
        payoffs.iter().map(|&p| (p as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    MonteCarloSummary {
        trials: payoffs.len(),
        n_tosses,
        mean,
        stderr: (var / n).sqrt(),
        lucky_fraction: payoffs.iter().filter(|&&p| p > 0).count() as f64 / n,
    }
}

pub fn montecarlo_mean_payoff(
    strategy: &dyn ClassicalStrategy,
    n_tosses: usize,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    if n_tosses == 0 {
        return Err(Error::InvalidParameter("n_tosses must be positive".into()));
    }
    if trials < 2 {
        return Err(Error::InvalidParameter("at least two trials are needed".into()));
    }
    Ok(summarize(&final_payoffs(strategy, n_tosses, trials, seed), n_tosses))
}

pub fn lucky_fraction(
    strategy: &dyn ClassicalStrategy,
    n_tosses: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if n_tosses == 0 || trials == 0 {
        return Err(Error::InvalidParameter(
            "n_tosses and trials must be positive".into(),
        ));
    }
    let payoffs = final_payoffs(strategy, n_tosses, trials, seed);
    Ok(payoffs.iter().filter(|&&p| p > 0).count() as f64 / trials as f64)
}

/// Largest `n` accepted by [`exhaustive_payoff_sum`].
pub const MAX_EXHAUSTIVE_TOSSES: usize = 20;

/// Sum of final payoffs over all `2^n` result strings of length `n`, with
/// the count of strings ending with a positive payoff.
pub fn exhaustive_payoff_sum(strategy: &dyn ClassicalStrategy, n: usize) -> Result<(i64, u64)> {
    if n == 0 || n > MAX_EXHAUSTIVE_TOSSES {
        return Err(Error::InvalidParameter(format!(
            "exhaustive enumeration needs 1 <= n <= {MAX_EXHAUSTIVE_TOSSES}, got {n}"
        )));
    }
    let mut sum = 0i64;
    let mut lucky = 0u64;
    for v in 0..(1u64 << n) {
        let s = BitString::from_index(v, n);
        let mut src = crate::sequences::Eventually::new(s, Bit::Zero);
        let p = final_payoff(strategy, &mut src, n);
        sum += p;
        lucky += u64::from(p > 0);
    }
    Ok((sum, lucky))
}
