use pagecert::asymptotic::{
    coverage_report, pintz_inequality_holds, pintz_inequality_holds_refined,
    side_condition_margin, solve_threshold, theorem_coverage, AsymptoticError, ThresholdReport,
    DEFAULT_Q0_FOR_A,
};
use pagecert::charbounds::Parity;
use pagecert::rigor::Enclosure;
use pagecert::search::published_table;

const TABLE_END: u128 = 910_000_000_000_000_000_000_000_000_000_000;

fn q(v: f64) -> Enclosure {
    Enclosure::point(v)
}

fn assert_root(threshold: Enclosure, frozen: f64) {
    // reference roots from a 30-digit scalar bisection of the same formulas
    let mid = threshold.midpoint();
    assert!(
        (mid / frozen - 1.0).abs() < 1e-9,
        "root {mid:e} vs expected {frozen:e}"
    );
    assert!(threshold.width() / mid < 1e-9, "loose root {threshold:?}");
}

#[test]
fn pintz_inequality_flips_at_the_known_boundary() {
    assert!(pintz_inequality_holds(1011, q(4.6e20)));
    assert!(!pintz_inequality_holds(1011, q(4.4e20)));
    assert!(!pintz_inequality_holds(1011, q(1e19)));
    // vanishing c passes for any q ≥ 3
    assert!(pintz_inequality_holds(1, q(3.0)));
    // certified over the whole interval, so a straddling box fails
    assert!(!pintz_inequality_holds(1011, Enclosure::new(1e19, 1e21)));
    assert!(pintz_inequality_holds(1011, Enclosure::new(4.6e20, 1e30)));
}

#[test]
fn pintz_inequality_forces_the_tau_guard() {
    // log q > 24ec/log 4 > 8c, hence τ ≤ c/log q < 1/8
    let factor = Enclosure::from_int(24) * Enclosure::one().exp()
        / (Enclosure::from_int(4).ln());
    assert!(factor.lo > 8.0);
    for c_milli in [200u32, 1011, 1500, 1999] {
        let c = c_milli as f64 / 1000.0;
        let boundary = (24.0 * std::f64::consts::E * c / 4f64.ln()).exp();
        let qq = q(boundary * 1.001);
        if pintz_inequality_holds(c_milli, qq) {
            assert!(c / qq.ln().lo < 0.125);
        }
    }
}

#[test]
fn refined_inequality_is_sharper_than_the_log4_bound() {
    // the partial-summation bound exceeds (log 4)/4, so the refinement
    // certifies smaller q; A(1200) keeps it valid down there
    assert!(!pintz_inequality_holds(1011, q(1e19)));
    assert!(pintz_inequality_holds_refined(1011, q(1e19), Parity::Even, 1200).unwrap());
    assert!(pintz_inequality_holds_refined(1011, q(1e19), Parity::Odd, 1200).unwrap());
    assert!(
        pintz_inequality_holds_refined(1011, q(4.6e20), Parity::Even, DEFAULT_Q0_FOR_A).unwrap()
    );
    // the τ < 1/8 guard no longer comes free and rejects tiny q
    assert!(!pintz_inequality_holds_refined(1011, q(2000.0), Parity::Even, 1200).unwrap());
}

#[test]
fn side_condition_margin_matches_reference_values() {
    let cases = [
        (Parity::Even, 2.6e32, DEFAULT_Q0_FOR_A, -0.02855422685),
        (Parity::Odd, 9.1e32, DEFAULT_Q0_FOR_A, -0.04254560192),
        (Parity::Odd, 9.1e32, TABLE_END, 0.001951508122),
    ];
    for (parity, qv, q0, frozen) in cases {
        let m = side_condition_margin(1011, q(qv), parity, q0).unwrap();
        // reference values carry 11 digits
        assert!(
            (m.midpoint() - frozen).abs() < 2e-11,
            "{m:?} should agree with {frozen}"
        );
        assert!(m.width() < 1e-10);
    }
}

#[test]
fn side_condition_margin_increases_in_q() {
    // the grid starts past the Pintz takeover at 4.6·10²⁰
    let mut prev = f64::NEG_INFINITY;
    for k in 21..=40 {
        let m = side_condition_margin(
            1011,
            Enclosure::pow10(k).unwrap(),
            Parity::Even,
            DEFAULT_Q0_FOR_A,
        )
        .unwrap();
        assert!(m.lo > prev, "not increasing at q = 1e{k}");
        prev = m.hi;
    }
}

#[test]
fn side_condition_margin_enforces_preconditions() {
    assert!(matches!(
        side_condition_margin(1011, q(1e19), Parity::Even, DEFAULT_Q0_FOR_A),
        Err(AsymptoticError::Domain(_))
    ));
    assert!(matches!(
        side_condition_margin(1011, q(1e21), Parity::Even, 1199),
        Err(AsymptoticError::Domain(_))
    ));
}

#[test]
fn thresholds_match_reference_roots() {
    let even_default = solve_threshold(1011, Parity::Even, DEFAULT_Q0_FOR_A).unwrap();
    assert_root(even_default.pintz_threshold, 4.59871414259e20);
    assert_root(even_default.side_condition_threshold, 2.80941991294e32);
    // the side condition dominates, so it is the combined threshold
    assert_eq!(
        even_default.combined_threshold.hi,
        even_default.side_condition_threshold.hi
    );

    let even_alt = solve_threshold(1011, Parity::Even, TABLE_END).unwrap();
    assert_root(even_alt.side_condition_threshold, 2.55014792816e32);

    let odd_default = solve_threshold(1011, Parity::Odd, DEFAULT_Q0_FOR_A).unwrap();
    assert_root(odd_default.pintz_threshold, 4.59871414259e20);
    assert_root(odd_default.side_condition_threshold, 1.02069691903e33);

    let odd_alt = solve_threshold(1011, Parity::Odd, TABLE_END).unwrap();
    assert_root(odd_alt.side_condition_threshold, 9.05219737733e32);
    // the published tail end sits above its own takeover point
    assert!(Enclosure::from_u128(TABLE_END).lo >= odd_alt.combined_threshold.hi);
}

#[test]
fn thresholds_fall_in_the_published_bands() {
    for q0 in [DEFAULT_Q0_FOR_A, TABLE_END] {
        let even = solve_threshold(1011, Parity::Even, q0).unwrap();
        assert!(even.pintz_threshold.lo > 4.3e20 && even.pintz_threshold.hi < 4.9e20);
        assert!(even.combined_threshold.lo > 2.2e32 && even.combined_threshold.hi < 3.0e32);
        let odd = solve_threshold(1011, Parity::Odd, q0).unwrap();
        assert!(odd.combined_threshold.lo > 7.7e32 && odd.combined_threshold.hi < 1.05e33);
    }
}

#[test]
fn threshold_solver_reports_runaway_roots() {
    // at c = 1.2 the margin root sits near 1.5·10⁵¹, past the 10⁴⁰ cap
    assert!(matches!(
        solve_threshold(1200, Parity::Even, DEFAULT_Q0_FOR_A),
        Err(AsymptoticError::NoSignChange)
    ));
    // the Pintz half alone still flips, near 3.35·10²⁴
    assert!(pintz_inequality_holds(1200, q(3.36e24)));
    assert!(!pintz_inequality_holds(1200, q(3.34e24)));

    assert!(matches!(
        solve_threshold(2000, Parity::Even, DEFAULT_Q0_FOR_A),
        Err(AsymptoticError::Domain(_))
    ));
}

#[test]
fn coverage_holds_at_the_published_constant() {
    let even = solve_threshold(1011, Parity::Even, DEFAULT_Q0_FOR_A).unwrap();
    let odd = solve_threshold(1011, Parity::Odd, TABLE_END).unwrap();
    let report = coverage_report(published_table(), &even, &odd);
    assert!(report.covered, "failures: {:?}", report.failures);
    assert!(theorem_coverage(published_table(), &even, &odd));

    // the even half works under either A(q₀) reading
    let even_alt = solve_threshold(1011, Parity::Even, TABLE_END).unwrap();
    assert!(theorem_coverage(published_table(), &even_alt, &odd));
}

#[test]
fn coverage_identifies_the_odd_self_consistency_gap() {
    // with A(4.6·10²⁰) the odd takeover point lands just past the table
    let even = solve_threshold(1011, Parity::Even, DEFAULT_Q0_FOR_A).unwrap();
    let odd = solve_threshold(1011, Parity::Odd, DEFAULT_Q0_FOR_A).unwrap();
    let report = coverage_report(published_table(), &even, &odd);
    assert!(!report.covered);
    assert!(
        report
            .failures
            .iter()
            .any(|f| f.contains("odd") && f.contains("side-condition")),
        "failures: {:?}",
        report.failures
    );
}

#[test]
fn coverage_detects_a_truncated_table() {
    let even = solve_threshold(1011, Parity::Even, DEFAULT_Q0_FOR_A).unwrap();
    let odd = solve_threshold(1011, Parity::Odd, TABLE_END).unwrap();
    let truncated = &published_table()[..20];
    let report = coverage_report(truncated, &even, &odd);
    assert!(!report.covered);
    assert!(report.failures.iter().any(|f| f.contains("even")));
    assert!(report.failures.iter().any(|f| f.contains("odd")));
}

#[test]
fn threshold_report_serializes() {
    let report: ThresholdReport =
        solve_threshold(1011, Parity::Even, DEFAULT_Q0_FOR_A).unwrap();
    let json = report.to_json();
    assert_eq!(json["c"], "1.011");
    assert_eq!(json["parity"], "even");
    assert!(json["combined_threshold"][0].as_f64().unwrap() > 2.2e32);
}
