//! Gambling strategies over binary histories and the subsequences they select.

use crate::error::{Error, Result};
use crate::sequences::{Bit, BitSequence, BitString, FrequencyStats};

/// The outcome of consulting a strategy: either a bet on a value or no bet at
/// all this turn. Not betting is an ordinary outcome, never an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wager<T> {
    Bet(T),
    Pass,
}

impl<T> Wager<T> {
    pub fn bet(&self) -> Option<&T> {
        match self {
            Wager::Bet(t) => Some(t),
            Wager::Pass => None,
        }
    }

    pub fn is_bet(&self) -> bool {
        matches!(self, Wager::Bet(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Wager<U> {
        match self {
            Wager::Bet(t) => Wager::Bet(f(t)),
            Wager::Pass => Wager::Pass,
        }
    }
}

/// A non-anticipating strategy: it sees the results so far and decides the
/// bet on the next toss. Implementations must be deterministic and total.
pub trait ClassicalStrategy: Send + Sync {
    fn name(&self) -> &str;

    fn decide(&self, history: &[Bit]) -> Wager<Bit>;
}

/// Bets that the next result repeats the last one; no bet on the empty
/// history.
#[derive(Clone, Copy, Debug, Default)]
pub struct BetOnLast;

impl ClassicalStrategy for BetOnLast {
    fn name(&self) -> &str {
        "bet-on-last"
    }

    fn decide(&self, history: &[Bit]) -> Wager<Bit> {
        match history.last() {
            Some(&b) => Wager::Bet(b),
            None => Wager::Pass,
        }
    }
}

/// Bets on whichever symbol has appeared less often; no bet on ties
/// (including the empty history).
#[derive(Clone, Copy, Debug, Default)]
pub struct BetLessFrequent;

impl ClassicalStrategy for BetLessFrequent {
    fn name(&self) -> &str {
        "bet-less-frequent"
    }

    fn decide(&self, history: &[Bit]) -> Wager<Bit> {
        let ones = history.iter().filter(|&&b| b == Bit::One).count();
        let zeros = history.len() - ones;
        match zeros.cmp(&ones) {
            std::cmp::Ordering::Equal => Wager::Pass,
            std::cmp::Ordering::Greater => Wager::Bet(Bit::One),
            std::cmp::Ordering::Less => Wager::Bet(Bit::Zero),
        }
    }
}

/// Bets on the same symbol every turn.
#[derive(Clone, Copy, Debug)]
pub struct AlwaysBet(pub Bit);

impl ClassicalStrategy for AlwaysBet {
    fn name(&self) -> &str {
        match self.0 {
            Bit::Zero => "always-0",
            Bit::One => "always-1",
        }
    }

    fn decide(&self, _history: &[Bit]) -> Wager<Bit> {
        Wager::Bet(self.0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NeverBet;

impl ClassicalStrategy for NeverBet {
    fn name(&self) -> &str {
        "never-bet"
    }

    fn decide(&self, _history: &[Bit]) -> Wager<Bit> {
        Wager::Pass
    }
}

/// Wraps a closure as a named strategy.
pub struct FnStrategy<F> {
    name: String,
    f: F,
}

impl<F> FnStrategy<F>
where
    F: Fn(&[Bit]) -> Wager<Bit> + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> ClassicalStrategy for FnStrategy<F>
where
    F: Fn(&[Bit]) -> Wager<Bit> + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn decide(&self, history: &[Bit]) -> Wager<Bit> {
        (self.f)(history)
    }
}

/// Registry names, in display order.
pub const BUILTIN_STRATEGIES: [&str; 5] = [
    "bet-on-last",
    "bet-less-frequent",
    "always-0",
    "always-1",
    "never-bet",
];

pub fn builtin(name: &str) -> Option<Box<dyn ClassicalStrategy>> {
    let s: Box<dyn ClassicalStrategy> = match name {
        "bet-on-last" => Box::new(BetOnLast),
        "bet-less-frequent" => Box::new(BetLessFrequent),
        "always-0" => Box::new(AlwaysBet(Bit::Zero)),
        "always-1" => Box::new(AlwaysBet(Bit::One)),
        "never-bet" => Box::new(NeverBet),
        _ => return None,
    };
    Some(s)
}

pub fn bet_on_last(history: &BitString) -> Wager<Bit> {
    BetOnLast.decide(history.bits())
}

pub fn bet_less_frequent(history: &BitString) -> Wager<Bit> {
    BetLessFrequent.decide(history.bits())
}

/// The subsequence selected by a strategy, with the 1-based source index of
/// every selected symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    pub extracted: BitString,
    pub selected_indices: Vec<usize>,
}

/// Selects `x_n` for `n <= horizon` exactly when the strategy bets 1 on the
/// history `x_1 .. x_{n-1}`.
pub fn extract(
    strategy: &dyn ClassicalStrategy,
    source: &mut dyn BitSequence,
    horizon: usize,
) -> ExtractionResult {
    let mut history = Vec::with_capacity(horizon);
    let mut extracted = BitString::empty();
    let mut selected_indices = Vec::new();
    for n in 1..=horizon {
        let selects = strategy.decide(&history) == Wager::Bet(Bit::One);
        let x = source.next_bit();
        if selects {
            extracted.push(x);
            selected_indices.push(n);
        }
        history.push(x);
    }
    ExtractionResult {
        extracted,
        selected_indices,
    }
}

/// Relative frequency of `attribute` in a finite extraction.
pub fn estimate_pvm(extracted: &BitString, attribute: Bit) -> Result<f64> {
    let stats = FrequencyStats::of(extracted);
    if stats.n == 0 {
        return Err(Error::EmptyExtraction);
    }
    Ok(stats.count(attribute) as f64 / stats.n as f64)
}
