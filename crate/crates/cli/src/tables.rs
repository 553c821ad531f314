//! `casino tables`: both strategy tables against a golden copy.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use casino_core::strategy::{BetLessFrequent, BetOnLast, ClassicalStrategy};
use casino_core::tables::{
    check_table, corrected_less_frequent_table, TableRow, BET_LESS_FREQUENT_TABLE, BET_ON_LAST_TABLE,
    LESS_FREQUENT_ERRATA,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Golden {
    /// Published tables with the two contradictory rows fixed.
    Corrected,
    /// Published tables exactly as printed.
    Published,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Reference copy the computed decisions are checked against.
    #[arg(long, value_enum, default_value = "corrected")]
    pub golden: Golden,
    /// Flips the golden cell of this history (exercises the failure path).
    #[arg(long, hide = true)]
    pub corrupt_golden: Option<String>,
}

/// Name, strategy, golden copy and published copy of one table.
type TableSpec<'a> = (&'static str, &'a dyn ClassicalStrategy, &'a [TableRow], &'a [TableRow]);

#[derive(Serialize)]
struct Row {
    table: &'static str,
    history: String,
    published: String,
    golden: String,
    computed: String,
    matches: bool,
}

fn label(bet: Option<u8>) -> String {
    bet.map_or("no-bet".into(), |b| b.to_string())
}

fn corrupt(rows: &mut [TableRow], history: &str) -> bool {
    let history = if history == "λ" { "" } else { history };
    let mut hit = false;
    for row in rows.iter_mut().filter(|r| r.0 == history) {
        row.1 = match row.1 {
            Some(0) => Some(1),
            Some(_) => Some(0),
            None => Some(0),
        };
        hit = true;
    }
    hit
}

/// Returns the process exit code: 0 when every cell matches, 2 otherwise.
pub fn run(args: &TablesArgs) -> Result<u8> {
    let mut golden_last: Vec<TableRow> = BET_ON_LAST_TABLE.to_vec();
    let mut golden_less: Vec<TableRow> = match args.golden {
        Golden::Corrected => corrected_less_frequent_table(),
        Golden::Published => BET_LESS_FREQUENT_TABLE.to_vec(),
    };
    if let Some(h) = &args.corrupt_golden {
        let a = corrupt(&mut golden_last, h);
        let b = corrupt(&mut golden_less, h);
        if !a && !b {
            bail!("no table row for history {h:?}");
        }
    }
    let specs: [TableSpec; 2] = [
        ("bet-on-last", &BetOnLast, &golden_last, &BET_ON_LAST_TABLE),
        ("bet-less-frequent", &BetLessFrequent, &golden_less, &BET_LESS_FREQUENT_TABLE),
    ];
    let mut rows = Vec::new();
    for (name, strategy, golden, published) in specs {
        for (check, (pub_row, gold_row)) in check_table(strategy, golden).into_iter().zip(published.iter().zip(golden)) {
            debug_assert_eq!(pub_row.0, gold_row.0);
            rows.push(Row {
                table: name,
                history: check.history,
                published: label(pub_row.1),
                golden: label(gold_row.1),
                computed: check.actual,
                matches: check.matches,
            });
        }
    }
    let mismatches = rows.iter().filter(|r| !r.matches).count();

    let mut out = String::new();
    match args.format {
        Format::Csv => {
            out.push_str("table,history,published,golden,computed,match\n");
            for r in &rows {
                writeln!(out, "{},{},{},{},{},{}", r.table, r.history, r.published, r.golden, r.computed, r.matches)?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                version: &'static str,
                golden: Golden,
                mismatches: usize,
                rows: &'a [Row],
            }
            out = serde_json::to_string_pretty(&Doc {
                version: crate::output::VERSION,
                golden: args.golden,
                mismatches,
                rows: &rows,
            })?;
            out.push('\n');
        }
        Format::Text => {
            for name in ["bet-on-last", "bet-less-frequent"] {
                writeln!(out, "{name}")?;
                writeln!(out, "  {:<8} {:<10} {:<8} {:<8}", "history", "published", "golden", "computed")?;
                for r in rows.iter().filter(|r| r.table == name) {
                    let flag = if r.matches { "" } else { "  MISMATCH" };
                    writeln!(out, "  {:<8} {:<10} {:<8} {:<8}{flag}", r.history, r.published, r.golden, r.computed)?;
                }
            }
            if matches!(args.golden, Golden::Corrected) {
                let fixed: Vec<String> = LESS_FREQUENT_ERRATA
                    .iter()
                    .map(|(h, p, f)| format!("{h}: {} -> {}", label(*p), label(*f)))
                    .collect();
                writeln!(out, "golden copy corrects published rows {}", fixed.join(", "))?;
            }
            writeln!(out, "{} rows, {mismatches} mismatches", rows.len())?;
        }
    }
    print!("{out}");
    if mismatches > 0 {
        eprintln!("error: {mismatches} table cells deviate from the golden copy");
        return Ok(2);
    }
    Ok(0)
}
