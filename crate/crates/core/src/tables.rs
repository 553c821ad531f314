//! Reference decision tables for the built-in strategies on every history
//! of length at most 4, as published, and a row-by-row checker.
//!
//! The tables are reproduced verbatim, including two rows of the
//! less-frequent table that contradict the rule they illustrate
//! (see [`LESS_FREQUENT_ERRATA`]).

use serde::Serialize;

use crate::sequences::{Bit, BitString};
use crate::strategy::{ClassicalStrategy, Wager};

/// `(history, bet)` with `None` for no bet and `""` for the empty history.
pub type TableRow = (&'static str, Option<u8>);

pub const BET_ON_LAST_TABLE: [TableRow; 31] = [
    ("", None),
    ("0", Some(0)),
    ("1", Some(1)),
    ("00", Some(0)),
    ("01", Some(1)),
    ("10", Some(0)),
    ("11", Some(1)),
    ("000", Some(0)),
    ("001", Some(1)),
    ("010", Some(0)),
    ("011", Some(1)),
    ("100", Some(0)),
    ("101", Some(1)),
    ("110", Some(0)),
    ("111", Some(1)),
    ("0000", Some(0)),
    ("0001", Some(1)),
    ("0010", Some(0)),
    ("0011", Some(1)),
    ("0100", Some(0)),
    ("0101", Some(1)),
    ("0110", Some(0)),
    ("0111", Some(1)),
    ("1000", Some(0)),
    ("1001", Some(1)),
    ("1010", Some(0)),
    ("1011", Some(1)),
    ("1100", Some(0)),
    ("1101", Some(1)),
    ("1110", Some(0)),
    ("1111", Some(1)),
];

pub const BET_LESS_FREQUENT_TABLE: [TableRow; 31] = [
    ("", None),
    ("0", Some(1)),
    ("1", Some(0)),
    ("00", Some(1)),
    ("01", None),
    ("10", None),
    ("11", Some(0)),
    ("000", Some(1)),
    ("001", Some(1)),
    ("010", Some(1)),
    ("011", Some(0)),
    ("100", Some(1)),
    ("101", Some(0)),
    ("110", Some(0)),
    ("111", Some(0)),
    ("0000", Some(1)),
    ("0001", Some(0)),
    ("0010", Some(1)),
    ("0011", None),
    ("0100", Some(1)),
    ("0101", None),
    ("0110", None),
    ("0111", Some(1)),
    ("1000", Some(1)),
    ("1001", None),
    ("1010", None),
    ("1011", Some(0)),
    ("1100", None),
    ("1101", Some(0)),
    ("1110", Some(0)),
    ("1111", Some(0)),
];

/// Rows of [`BET_LESS_FREQUENT_TABLE`] that disagree with the rule "bet 1
/// when zeros outnumber ones, 0 when ones do": `0001` has three zeros and
/// `0111` three ones. Each entry is `(history, published, by the rule)`.
pub const LESS_FREQUENT_ERRATA: [(&str, Option<u8>, Option<u8>); 2] =
    [("0001", Some(0), Some(1)), ("0111", Some(1), Some(0))];

/// A table with the errata rows replaced by what the rule prescribes.
pub fn corrected_less_frequent_table() -> Vec<TableRow> {
    BET_LESS_FREQUENT_TABLE
        .iter()
        .map(|&(h, bet)| {
            LESS_FREQUENT_ERRATA
                .iter()
                .find(|(eh, _, _)| *eh == h)
                .map_or((h, bet), |&(_, _, fixed)| (h, fixed))
        })
        .collect()
}

fn to_wager(bet: Option<u8>) -> Wager<Bit> {
    match bet {
        Some(0) => Wager::Bet(Bit::Zero),
        Some(_) => Wager::Bet(Bit::One),
        None => Wager::Pass,
    }
}

fn wager_label(w: &Wager<Bit>) -> String {
    match w {
        Wager::Bet(b) => b.to_string(),
        Wager::Pass => "no-bet".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub history: String,
    pub expected: String,
    pub actual: String,
    pub matches: bool,
}

/// Evaluates `strategy` on every row of `table`.
pub fn check_table(strategy: &dyn ClassicalStrategy, table: &[TableRow]) -> Vec<RowCheck> {
    table
        .iter()
        .map(|&(h, bet)| {
            let history: BitString = h.parse().expect("table histories are binary");
            let expected = to_wager(bet);
            let actual = strategy.decide(history.bits());
            RowCheck {
                history: if h.is_empty() { "λ".into() } else { h.into() },
                expected: wager_label(&expected),
                actual: wager_label(&actual),
                matches: expected == actual,
            }
        })
        .collect()
}

/// Every history of length `0..=max_len` in length-then-lexicographic order.
pub fn all_histories(max_len: usize) -> Vec<BitString> {
    (0..=max_len)
        .flat_map(|len| (0..1u64 << len).map(move |v| BitString::from_index(v, len)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{BetLessFrequent, BetOnLast};

    #[test]
    fn tables_cover_all_short_histories_in_order() {
        let order: Vec<String> = all_histories(4).iter().map(|h| h.to_string()).collect();
        for table in [&BET_ON_LAST_TABLE, &BET_LESS_FREQUENT_TABLE] {
            let rows: Vec<String> = table.iter().map(|(h, _)| h.to_string()).collect();
            assert_eq!(rows, order);
        }
    }

    #[test]
    fn bet_on_last_matches_published_table() {
        assert!(check_table(&BetOnLast, &BET_ON_LAST_TABLE).iter().all(|r| r.matches));
    }

    #[test]
    fn less_frequent_differs_only_on_errata_rows() {
        let wrong: Vec<String> = check_table(&BetLessFrequent, &BET_LESS_FREQUENT_TABLE)
            .into_iter()
            .filter(|r| !r.matches)
            .map(|r| r.history)
            .collect();
        assert_eq!(wrong, ["0001", "0111"]);
        assert!(check_table(&BetLessFrequent, &corrected_less_frequent_table())
            .iter()
            .all(|r| r.matches));
    }

    #[test]
    fn errata_follow_from_counts() {
        for (h, published, fixed) in LESS_FREQUENT_ERRATA {
            let s: BitString = h.parse().unwrap();
            let (z, o) = (s.count(Bit::Zero), s.count(Bit::One));
            let rule = if z > o { Some(1) } else if o > z { Some(0) } else { None };
            assert_eq!(rule, fixed);
            assert_ne!(rule, published);
        }
    }
}
