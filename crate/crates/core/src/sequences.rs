//! Finite bit strings, lazily generated bit sequences and their statistics.
//!
//! Infinite sequences are never materialized: every [`BitSequence`] is a
//! generator and callers choose the horizon they want to look at.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sampling::SeededRng;

/// A binary symbol. Head is `One`, tail is `Zero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

impl TryFrom<char> for Bit {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            '0' => Ok(Bit::Zero),
            '1' => Ok(Bit::One),
            other => Err(Error::Parse(format!("not a bit: {other:?}"))),
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A finite string over `{0, 1}`. The empty string is the empty word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<Bit>,
}

impl BitString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<Bit>) -> Self {
        Self { bits }
    }

    /// The string whose bits are the binary digits of `value`, most
    /// significant first, left-padded to `len` symbols.
    pub fn from_index(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .rev()
            .map(|shift| Bit::from(shift < 64 && (value >> shift) & 1 == 1))
            .collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[Bit] {
        &self.bits
    }

    pub fn push(&mut self, bit: Bit) {
        self.bits.push(bit);
    }

    /// The first `n` symbols (the whole string when `n` exceeds the length).
    pub fn prefix(&self, n: usize) -> BitString {
        Self {
            bits: self.bits[..n.min(self.bits.len())].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    pub fn count(&self, bit: Bit) -> usize {
        self.bits.iter().filter(|&&b| b == bit).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = Bit> + '_ {
        self.bits.iter().copied()
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s.chars().map(Bit::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromIterator<Bit> for BitString {
    fn from_iter<I: IntoIterator<Item = Bit>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl From<Vec<Bit>> for BitString {
    fn from(bits: Vec<Bit>) -> Self {
        Self { bits }
    }
}

/// An infinite binary sequence, produced one symbol at a time.
pub trait BitSequence {
    fn next_bit(&mut self) -> Bit;

    /// Consumes the next `n` symbols.
    fn take_prefix(&mut self, n: usize) -> BitString {
        (0..n).map(|_| self.next_bit()).collect()
    }
}

/// `head` followed by `tail` repeated forever; `Eventually::constant(b)` is
/// the constant sequence b b b ...
#[derive(Clone, Debug)]
pub struct Eventually {
    head: BitString,
    tail: Bit,
    pos: usize,
}

impl Eventually {
    pub fn new(head: BitString, tail: Bit) -> Self {
        Self { head, tail, pos: 0 }
    }

    pub fn constant(bit: Bit) -> Self {
        Self::new(BitString::empty(), bit)
    }
}

impl BitSequence for Eventually {
    fn next_bit(&mut self) -> Bit {
        let bit = self.head.bits().get(self.pos).copied().unwrap_or(self.tail);
        self.pos += 1;
        bit
    }
}

/// The concatenation of all binary strings in length-lexicographic order:
/// `0 1 00 01 10 11 000 ...`
#[derive(Clone, Debug)]
pub struct Champernowne {
    word_len: u32,
    word: u64,
    digit: u32,
}

impl Champernowne {
    pub fn new() -> Self {
        Self {
            word_len: 1,
            word: 0,
            digit: 0,
        }
    }
}

impl Default for Champernowne {
    fn default() -> Self {
        Self::new()
    }
}

impl BitSequence for Champernowne {
    fn next_bit(&mut self) -> Bit {
        let shift = self.word_len - 1 - self.digit;
        let bit = Bit::from((self.word >> shift) & 1 == 1);
        self.digit += 1;
        if self.digit == self.word_len {
            self.digit = 0;
            self.word += 1;
            if self.word == 1u64 << self.word_len {
                self.word = 0;
                self.word_len += 1;
            }
        }
        bit
    }
}

/// A sequence given by an index function `n -> x_n`, with `n` starting at 1.
pub struct IndexedSequence<F> {
    f: F,
    n: u64,
}

impl<F: Fn(u64) -> Bit> IndexedSequence<F> {
    pub fn new(f: F) -> Self {
        Self { f, n: 1 }
    }
}

impl<F: Fn(u64) -> Bit> BitSequence for IndexedSequence<F> {
    fn next_bit(&mut self) -> Bit {
        let bit = (self.f)(self.n);
        self.n += 1;
        bit
    }
}

/// Unbiased coin tosses drawn from a seeded generator.
#[derive(Clone, Debug)]
pub struct CoinTosses {
    rng: SeededRng,
}

impl CoinTosses {
    pub fn new(rng: SeededRng) -> Self {
        Self { rng }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(SeededRng::new(seed))
    }
}

impl BitSequence for CoinTosses {
    fn next_bit(&mut self) -> Bit {
        self.rng.sample_cbit()
    }
}

pub fn champernowne_prefix(n: usize) -> BitString {
    Champernowne::new().take_prefix(n)
}

/// An exact dyadic rational `numerator / 2^exponent`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: u128,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: u128, exponent: u32) -> Self {
        let mut d = Self {
            numerator,
            exponent,
        };
        d.reduce();
        d
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    fn reduce(&mut self) {
        if self.numerator == 0 {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().min(self.exponent);
        self.numerator >>= tz;
        self.exponent -= tz;
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 * (-(self.exponent as f64)).exp2()
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        let exponent = self.exponent.max(rhs.exponent);
        let lhs_num = self.numerator << (exponent - self.exponent);
        let rhs_num = rhs.numerator << (exponent - rhs.exponent);
        Dyadic::new(lhs_num + rhs_num, exponent)
    }
}

/// Probability of the cylinder of sequences extending `prefix` under the
/// unbiased measure: `2^-|prefix|`.
///
/// Exact for prefixes up to length 127; longer prefixes are rejected.
pub fn cylinder_probability(prefix: &BitString) -> Result<Dyadic> {
    let len = prefix.len();
    if len > 127 {
        return Err(Error::InvalidParameter(format!(
            "cylinder of length {len} is below exact dyadic resolution"
        )));
    }
    Ok(Dyadic::new(1, len as u32))
}

/// Number of `n` in `1..=len` at which the running frequency of ones is
/// exactly one half.
pub fn recurrence_count(prefix: &BitString) -> usize {
    let mut ones = 0usize;
    let mut hits = 0usize;
    for (i, b) in prefix.iter().enumerate() {
        if b == Bit::One {
            ones += 1;
        }
        if 2 * ones == i + 1 {
            hits += 1;
        }
    }
    hits
}

/// Running count of ones in a stream of symbols.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrequencyStats {
    pub n: usize,
    pub count_ones: usize,
}

impl FrequencyStats {
    pub fn of(bits: &BitString) -> Self {
        Self {
            n: bits.len(),
            count_ones: bits.count(Bit::One),
        }
    }

    pub fn observe(&mut self, bit: Bit) {
        self.n += 1;
        if bit == Bit::One {
            self.count_ones += 1;
        }
    }

    pub fn count(&self, attribute: Bit) -> usize {
        match attribute {
            Bit::One => self.count_ones,
            Bit::Zero => self.n - self.count_ones,
        }
    }

    /// `None` until at least one symbol has been seen.
    pub fn relative_frequency(&self) -> Option<f64> {
        (self.n > 0).then(|| self.count_ones as f64 / self.n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    /// Length-lexicographic enumeration, written independently of the
    /// incremental generator.
    fn champernowne_oracle(n: usize) -> String {
        let mut out = String::new();
        let mut len = 1;
        while out.len() < n {
            for v in 0..(1u64 << len) {
                out.push_str(&format!("{v:0len$b}"));
            }
            len += 1;
        }
        out.truncate(n);
        out
    }

    #[test]
    fn champernowne_matches_printed_prefix() {
        assert_eq!(
            champernowne_prefix(34).to_string(),
            "0100011011000001010011100101110111"
        );
        assert_eq!(champernowne_prefix(1).to_string(), "0");
        assert_eq!(champernowne_prefix(10).to_string(), "0100011011");
    }

    #[test]
    fn champernowne_matches_enumeration_oracle() {
        assert_eq!(champernowne_prefix(5000).to_string(), champernowne_oracle(5000));
    }

    #[test]
    fn cylinder_values() {
        assert_eq!(cylinder_probability(&BitString::empty()).unwrap(), Dyadic::one());
        assert_eq!(cylinder_probability(&bs("01")).unwrap().to_f64(), 0.25);
        assert_eq!(cylinder_probability(&bs("110")).unwrap().to_f64(), 0.125);
    }

    #[test]
    fn cylinder_rejects_unrepresentable_length() {
        let long = BitString::from_bits(vec![Bit::One; 200]);
        assert!(cylinder_probability(&long).is_err());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(recurrence_count(&bs("0101010101")), 5);
        assert_eq!(recurrence_count(&bs("0000")), 0);
        assert_eq!(recurrence_count(&bs("10")), 1);
        assert_eq!(recurrence_count(&BitString::empty()), 0);
    }

    #[test]
    fn eventually_constant_sources() {
        assert_eq!(Eventually::constant(Bit::Zero).take_prefix(4).to_string(), "0000");
        assert_eq!(Eventually::new(bs("01"), Bit::One).take_prefix(5).to_string(), "01111");
    }

    #[test]
    fn indexed_sequence_starts_at_one() {
        let mut odd = IndexedSequence::new(|n| Bit::from(n % 2 == 1));
        assert_eq!(odd.take_prefix(4).to_string(), "1010");
    }

    #[test]
    fn coin_tosses_are_reproducible() {
        let a = CoinTosses::from_seed(9).take_prefix(256);
        let b = CoinTosses::from_seed(9).take_prefix(256);
        assert_eq!(a, b);
    }

    #[test]
    fn frequency_stats() {
        let s = FrequencyStats::of(&bs("10011011"));
        assert_eq!(s.relative_frequency(), Some(0.625));
        assert_eq!(s.count(Bit::Zero), 3);
        assert_eq!(FrequencyStats::default().relative_frequency(), None);
    }

    #[test]
    fn from_index_pads() {
        assert_eq!(BitString::from_index(5, 4).to_string(), "0101");
        assert_eq!(BitString::from_index(0, 0).to_string(), "");
    }

    #[test]
    fn parse_rejects_non_binary() {
        assert!("0120".parse::<BitString>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn bitstring() -> impl Strategy<Value = BitString> {
            proptest::collection::vec(any::<bool>(), 0..100)
                .prop_map(|v| v.into_iter().map(Bit::from).collect())
        }

        proptest! {
            #[test]
            fn cylinder_measure_is_additive(x in bitstring()) {
                let zero = x.concat(&BitString::from_bits(vec![Bit::Zero]));
                let one = x.concat(&BitString::from_bits(vec![Bit::One]));
                prop_assert_eq!(
                    cylinder_probability(&zero).unwrap() + cylinder_probability(&one).unwrap(),
                    cylinder_probability(&x).unwrap()
                );
            }

            #[test]
            fn champernowne_prefixes_nest(n in 1usize..400, extra in 0usize..400) {
                prop_assert!(champernowne_prefix(n).is_prefix_of(&champernowne_prefix(n + extra)));
            }

            #[test]
            fn recurrence_is_monotone(x in bitstring(), y in bitstring()) {
                prop_assert!(recurrence_count(&x) <= recurrence_count(&x.concat(&y)));
            }
        }
    }
}
