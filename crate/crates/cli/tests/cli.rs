//! End-to-end runs of the `casino` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn casino(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casino"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ok_json(args: &[&str]) -> Value {
    let out = casino(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("summary is JSON")
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn tables_pass_against_corrected_golden() {
    let out = casino(&["tables"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("62 rows, 0 mismatches"));
}

#[test]
fn tables_csv_has_31_rows_per_table() {
    let out = casino(&["tables", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("table,history,published,golden,computed,match"));
    let rows: Vec<&str> = lines.collect();
    for name in ["bet-on-last,", "bet-less-frequent,"] {
        assert_eq!(rows.iter().filter(|l| l.starts_with(name)).count(), 31);
    }
}

#[test]
fn tables_fail_on_deviating_golden() {
    assert_eq!(casino(&["tables", "--corrupt-golden", "0101"]).status.code(), Some(2));
    let out = casino(&["tables", "--golden", "published", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["mismatches"], 2);
}

/// Payoffs of "bet that the last result repeats", computed directly.
fn repeat_last_payoffs(results: &str) -> Vec<i64> {
    let b = results.as_bytes();
    let mut p = 0;
    (0..b.len())
        .map(|i| {
            if i > 0 {
                p += if b[i] == b[i - 1] { 1 } else { -1 };
            }
            p
        })
        .collect()
}

#[test]
fn classical_fixed_evening() {
    let doc = ok_json(&["classical", "--results", "1101001001", "--strategy", "bet-on-last"]);
    assert_eq!(ints(&doc["result"]["payoffs"]), repeat_last_payoffs("1101001001"));
    assert_eq!(doc["result"]["final_payoff"], -3);
    let doc = ok_json(&["classical", "--results", "1101001001", "--strategy", "bet-less-frequent"]);
    assert_eq!(doc["result"]["final_payoff"], 3);
}

#[test]
fn classical_ledger_csv() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("ledger.csv");
    ok_json(&[
        "classical",
        "--results",
        "0110",
        "--ledger",
        ledger.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(ledger).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,result,bet,payoff_after");
    assert_eq!(lines.len(), 5);
}

#[test]
fn classical_defaults_are_echoed() {
    let doc = ok_json(&["classical", "--tosses", "50"]);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["config"]["strategy"], "bet-on-last");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(ints(&doc["result"]["payoffs"]).len(), 50);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let s = dir.path().join(format!("s{i}.json"));
            let l = dir.path().join(format!("l{i}.csv"));
            let out = casino(&[
                "quantum",
                "--kind",
                "3",
                "--tosses",
                "500",
                "--seed",
                "7",
                "--summary",
                s.to_str().unwrap(),
                "--ledger",
                l.to_str().unwrap(),
            ]);
            assert!(out.status.success());
            assert!(out.stdout.is_empty());
            [std::fs::read(s).unwrap(), std::fs::read(l).unwrap()].concat()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# evening\nstrategy = bet-less-frequent\nresults = 1101001001\nseed = 9\n").unwrap();
    let c = cfg.to_str().unwrap();
    let doc = ok_json(&["classical", "--config", c]);
    assert_eq!(doc["result"]["final_payoff"], 3);
    let doc = ok_json(&["classical", "--config", c, "--strategy", "bet-on-last"]);
    assert_eq!(doc["result"]["final_payoff"], -3);

    std::fs::write(&cfg, "tosses = 10\nbogus = 1\n").unwrap();
    let out = casino(&["classical", "--config", c]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    std::fs::write(&cfg, "tosses = 0\n").unwrap();
    assert!(!casino(&["classical", "--config", c]).status.success());
}

#[test]
fn invalid_values_are_rejected() {
    for args in [
        &["quantum", "--epsilon", "-1"][..],
        &["quantum", "--kind", "4"],
        &["quantum", "--kind", "1", "--strategy", "pauli"],
        &["quantum", "--dense-cap", "11"],
        &["classical", "--strategy", "martingale"],
        &["classical", "--results", "0120"],
        &["montecarlo", "--trials", "1"],
        &["metrics"],
    ] {
        let out = casino(args);
        assert_eq!(out.status.code(), Some(1), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn fixture_replay_trajectory() {
    let coins = fixture("paper_coins.json");
    for mode in ["normalized", "plain", "per-factor"] {
        let doc = ok_json(&["quantum", "--kind", "3", "--fixtures", &coins, "--mode", mode, "--tosses", "4"]);
        assert_eq!(ints(&doc["result"]["payoffs"]), [0, -1, -2, -3]);
    }
    let doc = ok_json(&["quantum", "--kind", "3", "--fixtures", &coins, "--mode", "plain"]);
    let first = doc["result"]["decision_values"][1].as_f64().unwrap();
    assert!((first - 157.25).abs() < 1e-3);
    assert!(!casino(&["quantum", "--kind", "3", "--fixtures", &coins, "--tosses", "6"]).status.success());
}

#[test]
fn constant_bets_in_state_casinos() {
    let doc = ok_json(&["quantum", "--kind", "1", "--bet", "plus", "--tosses", "20000"]);
    let wins = doc["result"]["wins"].as_f64().unwrap() / 20000.0;
    assert!((wins - 0.0625).abs() < 0.01, "{wins}");
    let doc = ok_json(&["quantum", "--kind", "2", "--bet", "bloch:0,0,0", "--tosses", "20000"]);
    let wins = doc["result"]["wins"].as_f64().unwrap() / 20000.0;
    assert!((wins - 0.125).abs() < 0.01, "{wins}");
    assert!(!casino(&["quantum", "--kind", "2", "--bet", "bloch:0,0,2"]).status.success());
}

#[test]
fn metrics_on_fixtures() {
    let doc = ok_json(&["metrics", "--input", &fixture("epr.json")]);
    assert_eq!(doc["result"]["states"][0]["entanglement_degree"], 1);
    let doc = ok_json(&["metrics", "--input", &fixture("identical_states.json")]);
    let pair = &doc["result"]["pairs"][0];
    assert!(pair["trace_distance"].as_f64().unwrap().abs() < 1e-12);
    assert!((pair["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn metrics_bound_search() {
    let doc = ok_json(&["metrics", "--fuzz-bounds", "--trials", "200", "--seed", "3"]);
    assert_eq!(doc["result"]["trials"], 200);
    assert_eq!(doc["result"]["lower_bound_violations"], 0);
    assert_eq!(doc["result"]["sqrt_one_minus_f2_violations"], 0);
}

#[test]
fn montecarlo_trend_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trend.csv");
    let doc = ok_json(&[
        "montecarlo",
        "--strategy",
        "never-bet",
        "--trials",
        "50",
        "--checkpoints",
        "10,100",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(doc["result"][1]["mean"], 0.0);
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("n_tosses,trials,mean,stderr,lucky_fraction\n10,50,"));
}

#[test]
fn montecarlo_classical_mean_is_small() {
    let doc = ok_json(&["montecarlo", "--trials", "4000", "--tosses", "100"]);
    let r = &doc["result"];
    let (mean, se) = (r["mean"].as_f64().unwrap(), r["stderr"].as_f64().unwrap());
    assert!(mean.abs() < 5.0 * se, "{mean} +- {se}");
}
