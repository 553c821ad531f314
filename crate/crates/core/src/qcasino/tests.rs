use num_complex::Complex64;

use super::*;
use crate::qmatrix::tests::{coin_1, coin_2, coin_3};
use crate::qmetrics::bloch_to_state;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Printed `a(4) - sigma_z` plus `sigma_z`.
fn coin_4() -> CMatrix {
    CMatrix::from_vec(
        2,
        2,
        vec![c(4.55982, -1.58403), c(2.19976, -1.67009), c(0.284886, 2.77311), c(-8.06443, -6.30601)],
    )
}

/// The second printed `a(4) - sigma_z` plus `sigma_z`.
fn coin_5() -> CMatrix {
    CMatrix::from_vec(
        2,
        2,
        vec![c(-7.49908, 1.07129), c(-0.361299, -7.07676), c(9.60704, 6.81686), c(-2.16288, -3.10934)],
    )
}

fn worked_coins() -> Vec<CMatrix> {
    vec![coin_1(), coin_2(), coin_3(), coin_4(), coin_5()]
}

fn kind3() -> QuantumCasinoConfig {
    QuantumCasinoConfig::new(CasinoKind::Third)
}

fn bet_label(r: &QuantumTossRecord) -> String {
    match &r.bet {
        Wager::Bet(b) => b.to_string(),
        Wager::Pass => "no-bet".into(),
    }
}

#[test]
fn config_validation() {
    let mut cfg = kind3();
    assert!(cfg.validate().is_ok());
    cfg.epsilon = 0.0;
    assert!(cfg.validate().is_err());
    cfg.epsilon = f64::NAN;
    assert!(cfg.validate().is_err());
    let mut cfg = kind3();
    cfg.edge = -1.0;
    assert!(cfg.validate().is_err());
    let mut cfg = kind3();
    cfg.n_tosses = 0;
    assert!(cfg.validate().is_err());
    let mut cfg = kind3();
    cfg.dense_cap = DENSE_CAP + 1;
    assert!(cfg.validate().is_err());
    assert!(play_kind1(&QuantumNeverBet, &kind3()).is_err());
    assert!(CasinoKind::from_number(4).is_err());
    assert_eq!(QuantumCasinoConfig::new(CasinoKind::First).epsilon, 0.25);
}

#[test]
fn worked_evening_decisions_and_payoffs() {
    for mode in [TraceNormalization::Normalized, TraceNormalization::Plain, TraceNormalization::PerFactor] {
        for dist in [CoinDistance::OperatorNorm, CoinDistance::SpectralRadius] {
            let cfg = QuantumCasinoConfig { coin_distance: dist, ..kind3() };
            let ledger = play_kind3_fixed(&PauliStrategy::new(mode), &cfg, &worked_coins()).unwrap();
            let bets: Vec<String> = ledger.records.iter().map(bet_label).collect();
            assert_eq!(bets, ["no-bet", "sigma_z", "sigma_z", "sigma_z", "sigma_z"]);
            assert_eq!(ledger.payoffs(), vec![0, -1, -2, -3, -4]);
        }
    }
}

#[test]
fn worked_evening_printed_distances_are_spectral_radii() {
    let cfg = QuantumCasinoConfig { coin_distance: CoinDistance::SpectralRadius, ..kind3() };
    let ledger = play_kind3_fixed(&PauliStrategy::default(), &cfg, &worked_coins()).unwrap();
    let printed = [11.5984, 15.3175, 10.0665, 14.1717];
    for (r, p) in ledger.records[1..].iter().zip(printed) {
        assert!((r.distance.unwrap() - p).abs() < 1e-3, "{} vs {p}", r.distance.unwrap());
    }
}

#[test]
fn worked_evening_operator_norms() {
    let ledger = play_kind3_fixed(&PauliStrategy::default(), &kind3(), &worked_coins()).unwrap();
    let norms = [17.73501, 19.19202, 10.06669, 15.13662];
    for (r, n) in ledger.records[1..].iter().zip(norms) {
        assert!((r.distance.unwrap() - n).abs() < 1e-3, "{} vs {n}", r.distance.unwrap());
    }
}

#[test]
fn worked_evening_decision_values() {
    let plain = play_kind3_fixed(&PauliStrategy::new(TraceNormalization::Plain), &kind3(), &worked_coins()).unwrap();
    assert!(plain.records[0].decision_value().is_none());
    assert!((plain.records[1].decision_value().unwrap() - 157.25).abs() < 1e-2);

    // the printed values for prefixes of length 1..4 are Tr / n
    let per = play_kind3_fixed(&PauliStrategy::new(TraceNormalization::PerFactor), &kind3(), &worked_coins()).unwrap();
    let printed = [157.25, 26451.7, 6.97591e6, 7.5079e8];
    for (r, p) in per.records[1..].iter().zip(printed) {
        let v = r.decision_value().unwrap();
        assert!((v - p).abs() <= 2e-5 * p, "{v} vs {p}");
    }
}

#[test]
fn pauli_cases() {
    let s = PauliStrategy::default();
    assert_eq!(s.decide(&QuantumPrefix::new()), Wager::Pass);
    let zero = QuantumPrefix::new().extended(&CMatrix::zeros(2, 2)).unwrap();
    assert_eq!(s.decide(&zero), Wager::Bet(CMatrix::pauli_x()));
    // Tr(I/4 ^dagger I/4) = 1/8 < 1 after normalization
    let small = QuantumPrefix::new().extended(&CMatrix::identity(2).scale_real(0.25)).unwrap();
    assert_eq!(s.decide(&small), Wager::Bet(CMatrix::pauli_y()));
    assert_eq!(PauliStrategy::new(TraceNormalization::Plain).decide(&small), Wager::Bet(CMatrix::pauli_y()));
    let big = QuantumPrefix::new().extended(&coin_1()).unwrap();
    assert_eq!(s.decide(&big), Wager::Bet(CMatrix::pauli_z()));
}

#[test]
fn normalized_and_plain_agree_on_random_prefixes() {
    let mut rng = SeededRng::new(81);
    let norm = PauliStrategy::new(TraceNormalization::Normalized);
    let plain = PauliStrategy::new(TraceNormalization::Plain);
    for edge in [0.5, 1.0, 2.0, 3.0, 10.0] {
        let mut p = QuantumPrefix::new();
        for _ in 0..200 {
            p.extend(&rng.sample_algebraic_coin(edge).unwrap()).unwrap();
            assert_eq!(norm.decide(&p), plain.decide(&p));
        }
    }
}

#[test]
fn exact_match_wins() {
    let cfg = QuantumCasinoConfig { n_tosses: 1, ..kind3() };
    let ledger = play_kind3_fixed(&ConstantBet(CMatrix::pauli_z()), &cfg, &[CMatrix::pauli_z()]).unwrap();
    assert_eq!(ledger.records[0].distance, Some(0.0));
    assert_eq!(ledger.final_payoff(), 1);
}

#[test]
fn never_bet_kind3_long_run() {
    let cfg = QuantumCasinoConfig { seed: 3, ..kind3() };
    let stats = run_kind3(&QuantumNeverBet, &cfg, |r| assert_eq!(r.payoff_after, 0)).unwrap();
    assert_eq!(stats.final_payoff, 0);
    assert_eq!(stats.bets, 0);
    assert_eq!(stats.prefix_dense_bytes, 0);
}

#[test]
fn kind3_deterministic_across_dense_caps() {
    let base = QuantumCasinoConfig { n_tosses: 40, seed: 17, ..kind3() };
    let a = play_kind3(&PauliStrategy::default(), &base).unwrap();
    let b = play_kind3(&PauliStrategy::default(), &QuantumCasinoConfig { dense_cap: 0, ..base.clone() }).unwrap();
    let c = play_kind3(&PauliStrategy::default(), &base).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), c.to_csv());
}

#[test]
fn kind1_never_bet_and_degenerate_epsilon() {
    let cfg = QuantumCasinoConfig { n_tosses: 200, seed: 4, ..QuantumCasinoConfig::new(CasinoKind::First) };
    assert_eq!(play_kind1(&QuantumNeverBet, &cfg).unwrap().final_payoff(), 0);
    let wide = QuantumCasinoConfig { epsilon: 1.0, ..cfg.clone() };
    let bet = ConstantBet(PureState::basis(2, 0));
    assert_eq!(play_kind1(&bet, &wide).unwrap().final_payoff(), 200);
    let wide_angle = QuantumCasinoConfig { epsilon: std::f64::consts::FRAC_PI_2, metric: StateMetric::Angle, ..cfg };
    assert_eq!(play_kind1(&bet, &wide_angle).unwrap().final_payoff(), 200);
}

#[test]
fn kind1_rejects_wrong_dimension_bet() {
    let cfg = QuantumCasinoConfig { n_tosses: 3, ..QuantumCasinoConfig::new(CasinoKind::First) };
    let bet = ConstantBet(PureState::basis(4, 0));
    assert!(matches!(play_kind1(&bet, &cfg), Err(Error::InvalidBet(_))));
}

#[test]
fn pure_distance_matches_projector_trace_distance() {
    let mut rng = SeededRng::new(82);
    for _ in 0..200 {
        let a = rng.sample_pure_state();
        let b = rng.sample_pure_state();
        let fast = pure_distance(&a, &b, StateMetric::Trace).unwrap();
        let slow = trace_distance(&a.density(), &b.density()).unwrap();
        assert!((fast - slow).abs() < 1e-9);
        let fast = pure_distance(&a, &b, StateMetric::Angle).unwrap();
        let slow = angle_distance(&a.density(), &b.density()).unwrap();
        assert!((fast - slow).abs() < 1e-7);
    }
}

#[test]
fn kind1_constant_bet_win_rate() {
    // |<psi|0>|^2 is uniform on [0, 1] for Haar psi, so P(D <= eps) = eps^2
    let n = 100_000;
    let cfg = QuantumCasinoConfig { n_tosses: n, seed: 5, ..QuantumCasinoConfig::new(CasinoKind::First) };
    let stats = run_kind1(&ConstantBet(PureState::basis(2, 0)), &cfg, |_| {}).unwrap();
    let w = stats.wins as f64 / n as f64;
    let p = 0.0625;
    assert!((w - p).abs() <= 3.0 * (p * (1.0 - p) / n as f64).sqrt(), "{w}");

    // independent estimate through the general trace distance, other seed
    let mut rng = SeededRng::new(6);
    let bet = PureState::basis(2, 0).density();
    let m = 20_000;
    let hits = (0..m)
        .filter(|_| trace_distance(&rng.sample_pure_state().density(), &bet).unwrap() <= 0.25)
        .count();
    let v = hits as f64 / m as f64;
    let se = (w * (1.0 - w) / n as f64 + v * (1.0 - v) / m as f64).sqrt();
    assert!((w - v).abs() <= 3.0 * se);
}

#[test]
fn kind2_maximally_mixed_bet() {
    let bet = ConstantBet(bloch_to_state([0.0, 0.0, 0.0]).unwrap());
    let base = QuantumCasinoConfig { n_tosses: 100_000, seed: 7, ..QuantumCasinoConfig::new(CasinoKind::Second) };
    let always = run_kind2(&bet, &QuantumCasinoConfig { epsilon: 0.5, n_tosses: 5000, ..base.clone() }, |_| {}).unwrap();
    assert_eq!(always.wins, 5000);
    let stats = run_kind2(&bet, &base, |_| {}).unwrap();
    let w = stats.wins as f64 / base.n_tosses as f64;
    let p = 0.125;
    assert!((w - p).abs() <= 3.0 * (p * (1.0 - p) / base.n_tosses as f64).sqrt(), "{w}");
    assert_eq!(play_kind2(&QuantumNeverBet, &QuantumCasinoConfig { n_tosses: 50, ..base }).unwrap().final_payoff(), 0);
}

#[test]
fn quantum_ledger_csv() {
    let ledger = play_kind3_fixed(&PauliStrategy::new(TraceNormalization::Plain), &kind3(), &worked_coins()[..2]).unwrap();
    let csv = ledger.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "index,result,bet,distance,payoff_after,decision_value,log_decision_value");
    assert_eq!(lines.len(), 3);
    let row2: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(row2.len(), 7);
    assert_eq!(row2[2], "sigma_z");
    assert_eq!(row2[4], "-1");
    assert!(lines[1].contains(",no-bet,,0,,"));
}

#[test]
fn montecarlo_never_bet() {
    let cfg = QuantumCasinoConfig { n_tosses: 50, seed: 8, ..kind3() };
    let s = montecarlo_quantum(AnyStrategy::Third(&QuantumNeverBet), &cfg, 100).unwrap();
    assert_eq!(s.mean, 0.0);
    assert_eq!(s.lucky_fraction, 0.0);
    assert!(montecarlo_quantum(AnyStrategy::Third(&QuantumNeverBet), &cfg, 1).is_err());
}

#[test]
fn montecarlo_is_reproducible() {
    let cfg = QuantumCasinoConfig { n_tosses: 30, seed: 9, ..kind3() };
    let a = montecarlo_quantum(AnyStrategy::Third(&PauliStrategy::default()), &cfg, 200).unwrap();
    let b = montecarlo_quantum(AnyStrategy::Third(&PauliStrategy::default()), &cfg, 200).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lucky_trend_checkpoints() {
    let cfg = QuantumCasinoConfig { seed: 10, ..kind3() };
    let t = lucky_trend(AnyStrategy::Third(&PauliStrategy::default()), &cfg, 50, &[20, 5, 10]).unwrap();
    assert_eq!(t.iter().map(|s| s.n_tosses).collect::<Vec<_>>(), vec![5, 10, 20]);
    let direct = montecarlo_quantum(
        AnyStrategy::Third(&PauliStrategy::default()),
        &QuantumCasinoConfig { n_tosses: 20, ..cfg.clone() },
        50,
    )
    .unwrap();
    assert_eq!(t[2], direct);
    assert!(lucky_trend(AnyStrategy::Third(&QuantumNeverBet), &cfg, 50, &[]).is_err());
}
