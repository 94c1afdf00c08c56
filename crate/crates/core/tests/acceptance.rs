//! End-to-end acceptance: the published table reproduces, certifies, and
//! composes with the large-moduli inequalities into full coverage, the
//! oracle grounds every identity at desk scale, and 10% corruption of any
//! error-term ingredient is detected. Each test states its runtime budget;
//! the binary runs single-threaded here, so wall-clock asserts are fair.

use std::time::{Duration, Instant};

use pagecert::asymptotic::{solve_threshold, theorem_coverage, DEFAULT_Q0_FOR_A};
use pagecert::charbounds::{ModulusRange, Parity};
use pagecert::criterion::{ErrorModel, Status};
use pagecert::oracle::{
    check_decomposition, dd_enclosure, direct_log_power_sum, direct_power_sum,
    direct_weighted_sum, g_table, test_discriminants, RealCharacter,
};
use pagecert::rigor::Enclosure;
use pagecert::search::{
    default_x_grid, find_best, published_table, verify_row_with, verify_table, SearchOptions,
};
use pagecert::specfun::{c1_constant, c2_constant, log_power_sum, power_sum, tail_f, zeta_deriv};
use pagecert::criterion::{budget_term, PrecisionLevel};

const TABLE_END: u128 = 910_000_000_000_000_000_000_000_000_000_000;

/// Worst certified margin of the first even row under the identity model.
/// The value is a deterministic product of the subdivision; the tolerance
/// sits three orders of magnitude above floating-point reproducibility
/// noise and five times below the smallest 10% corruption response
/// (the bracket constant moves this margin by 9.3e-4).
const ROW0_MARGIN: f64 = -0.319801;
const ROW0_MARGIN_TOL: f64 = 2e-4;

fn even_entry(idx: usize) -> (u32, u32) {
    let e = published_table()[idx].entry(Parity::Even).unwrap();
    (e.c_milli, e.log10_x_centi)
}

// ---------------------------------------------------------------- 1: search

#[test]
fn search_reproduces_the_leading_even_rows() {
    // deterministic outcomes of the galloping search, frozen once measured;
    // the published constants are 1.011..1.030, and the re-derived error
    // term certifies strictly more, so the published value must sit at or
    // below the found constant within the 0.01 allowance
    let frozen: [(u32, u32); 5] = [(1186, 472), (1207, 484), (1192, 503), (1191, 523), (1182, 549)];
    for (idx, (c_pin, x_pin)) in frozen.into_iter().enumerate() {
        let row = &published_table()[idx];
        let published = even_entry(idx).0;
        let range = ModulusRange::new(row.q_lo, row.q_hi, Parity::Even).unwrap();
        let grid = default_x_grid(&range, 1000);
        let clock = Instant::now();
        let best = find_best(range, 1000, 1, &grid).expect("row must certify at c = 1.000");
        let elapsed = clock.elapsed();
        assert!(
            elapsed < Duration::from_secs(60),
            "row {idx} took {elapsed:?}, budget is 60 s"
        );
        assert_eq!(best.certificate.status, Status::Certified);
        assert!(
            best.c_milli + 10 >= published,
            "row {idx}: found {} against published {published}",
            best.c_milli
        );
        assert_eq!(
            (best.c_milli, best.log10_x_centi),
            (c_pin, x_pin),
            "row {idx} search outcome drifted"
        );
    }
}

// --------------------------------------------------------------- 2: certify

#[test]
fn every_published_row_certifies() {
    let clock = Instant::now();
    let opts = SearchOptions::default();
    let even = verify_table(published_table(), Parity::Even, &opts);
    let odd = verify_table(published_table(), Parity::Odd, &opts);
    assert_eq!(even.len(), 22);
    assert_eq!(odd.len(), 13);

    // rows whose printed 3-digit constants overshoot the side condition by
    // rounding; each certifies after the minimal 1-thousandth reduction
    let expect_reduced = [
        (Parity::Even, 3usize),
        (Parity::Even, 9),
        (Parity::Even, 20),
        (Parity::Odd, 13),
    ];

    let mut reduced = Vec::new();
    for (parity, results) in [(Parity::Even, &even), (Parity::Odd, &odd)] {
        for (idx, res) in results {
            let cert = res.as_ref().unwrap_or_else(|e| {
                panic!("row {idx} ({parity:?}) failed: {e}");
            });
            assert_eq!(
                cert.status,
                Status::Certified,
                "row {idx} ({parity:?}) not certified"
            );
            let published = published_table()[*idx].entry(parity).unwrap().c_milli;
            match cert.reduced_from {
                Some(orig) => {
                    assert_eq!(orig, published);
                    assert_eq!(cert.config.c_milli, published - 1);
                    reduced.push((parity, *idx));
                }
                None => assert_eq!(cert.config.c_milli, published),
            }
        }
    }
    assert_eq!(reduced, expect_reduced, "set of flagged rows changed");

    // regression witness: the first even row's certified margin, relied on
    // by the corruption-sensitivity test below
    let (_, first) = &even[0];
    let margin = first.as_ref().unwrap().f_star.hi;
    assert!(
        (margin - ROW0_MARGIN).abs() <= ROW0_MARGIN_TOL,
        "row 0 margin drifted: {margin}"
    );

    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(1800),
        "full table took {elapsed:?}, budget is 30 min"
    );
}

// --------------------------------------------------------- 3: side condition

#[test]
fn published_witnesses_respect_the_side_condition() {
    // log x ≤ log q_lo / c must hold for the pair actually certified: the
    // printed constant, or its 1-thousandth reduction on the four rows
    // where 3-digit rounding overshoots
    let reduced = [(Parity::Even, 3usize), (Parity::Even, 9), (Parity::Even, 20), (Parity::Odd, 13)];
    for (idx, row) in published_table().iter().enumerate() {
        for parity in [Parity::Even, Parity::Odd] {
            let Some(e) = row.entry(parity) else { continue };
            let c_eff = if reduced.contains(&(parity, idx)) {
                e.c_milli - 1
            } else {
                e.c_milli
            };
            let lhs = Enclosure::from_ratio(c_eff as i64, 1000)
                * Enclosure::from_ratio(e.log10_x_centi as i64, 100)
                * Enclosure::from_int(10).ln();
            let rhs = Enclosure::from_u128(row.q_lo).ln();
            assert!(
                lhs.hi <= rhs.lo,
                "side condition fails at row {idx} ({parity:?}) with c = {c_eff}"
            );
        }
    }

    // first row: log x = 12.756... against log q_lo / c = 12.758...
    let (c, lgx) = even_entry(0);
    let ln_x = Enclosure::from_ratio(lgx as i64, 100) * Enclosure::from_int(10).ln();
    let bound = Enclosure::from_u128(published_table()[0].q_lo).ln()
        / Enclosure::from_ratio(c as i64, 1000);
    let margin = (bound - ln_x).midpoint();
    assert!(
        (margin - 0.002).abs() <= 0.001,
        "first-row side-condition margin is {margin}"
    );
}

// ------------------------------------------------------------- 4: thresholds

#[test]
fn thresholds_land_in_the_published_windows() {
    let clock = Instant::now();
    let within = |e: Enclosure, lo: f64, hi: f64| e.lo >= lo && e.hi <= hi;
    for q0 in [DEFAULT_Q0_FOR_A, TABLE_END] {
        let even = solve_threshold(1011, Parity::Even, q0).unwrap();
        let odd = solve_threshold(1011, Parity::Odd, q0).unwrap();
        assert!(
            within(even.pintz_threshold, 4.3e20, 4.9e20),
            "pintz threshold out of window under q0 = {q0}"
        );
        assert!(
            within(even.combined_threshold, 2.2e32, 3.0e32),
            "even combined threshold out of window under q0 = {q0}"
        );
        assert!(
            within(odd.combined_threshold, 7.7e32, 1.05e33),
            "odd combined threshold out of window under q0 = {q0}"
        );
    }
    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "threshold solving took {elapsed:?}, budget is 1 s"
    );
}

// --------------------------------------------------------------- 5: coverage

#[test]
fn coverage_certifies_the_constant_end_to_end() {
    // the odd Pólya–Vinogradov constant is read at q0 = 9.1e32, valid for
    // every modulus past the table end since A decreases in q0; the even
    // report works under the conservative default as well
    let even = solve_threshold(1011, Parity::Even, DEFAULT_Q0_FOR_A).unwrap();
    let odd = solve_threshold(1011, Parity::Odd, TABLE_END).unwrap();
    assert!(theorem_coverage(published_table(), &even, &odd));
}

// ----------------------------------------------------------------- 6: oracle

#[test]
fn oracle_containment_suite_passes() {
    let clock = Instant::now();

    // partial-sum enclosures contain 30-digit direct sums
    let mut points = 0;
    for (num, den) in [(1i64, 10i64), (1, 2), (9, 10)] {
        let alpha = Enclosure::from_ratio(num, den);
        for x in [10u64, 100, 1000, 100_000] {
            let xe = Enclosure::from_u128(x.into());
            let ps = power_sum(xe, alpha).as_enclosure();
            let ls = log_power_sum(xe, alpha).as_enclosure();
            assert!(
                ps.contains(direct_power_sum(x, num, den).to_f64()),
                "power sum escapes enclosure at alpha = {num}/{den}, x = {x}"
            );
            assert!(
                ls.contains(direct_log_power_sum(x, num, den).to_f64()),
                "log power sum escapes enclosure at alpha = {num}/{den}, x = {x}"
            );
            points += 1;
        }
    }
    assert_eq!(points, 12);

    // the decomposition identity across the character grid
    let grid = [5i64, 8, 13, -3, -4, -7];
    let mut cello = 0;
    for &d in &grid {
        let chi = RealCharacter::new(d).unwrap();
        for x in [100u64, 1000] {
            for (tn, td) in [(1i64, 100i64), (1, 20)] {
                assert_eq!(
                    check_decomposition(&chi, x, tn, td),
                    Ok(true),
                    "decomposition fails at d = {d}, x = {x}, tau = {tn}/{td}"
                );
                cello += 1;
            }
        }
    }
    assert_eq!(cello, 24);

    // the lower-bound budget holds to x = 10⁴
    for &d in &grid {
        let chi = RealCharacter::new(d).unwrap();
        for x in [100u64, 1000, 10_000] {
            for (tn, td) in [(1i64, 100i64), (1, 20)] {
                let tau = Enclosure::from_ratio(tn, td);
                let alpha = Enclosure::from_ratio(2 * tn - td, td);
                let floor = budget_term(tau, PrecisionLevel::Standard).lo
                    - tail_f(alpha, Enclosure::from_u128(x.into())).hi;
                let sum = dd_enclosure(direct_weighted_sum(&chi, x, tn, td).unwrap());
                assert!(
                    sum.lo >= floor,
                    "budget floor fails at d = {d}, x = {x}, tau = {tn}/{td}"
                );
            }
        }
    }

    // positivity of the divisor sum, the engine of the whole method
    for d in test_discriminants() {
        let chi = RealCharacter::new(d).unwrap();
        let g = g_table(&chi, 100_000);
        for n in 1..=100_000usize {
            assert!(g[n] >= 0, "g({n}) < 0 for discriminant {d}");
        }
        for m in 1..=316u64 {
            assert!(
                g[(m * m) as usize] >= 1,
                "g({m}²) = 0 for discriminant {d}"
            );
        }
    }

    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "oracle suite took {elapsed:?}, budget is 5 min"
    );
}

// --------------------------------------------------- 7: special functions

#[test]
fn euler_maclaurin_constants_match_zeta_references() {
    // ζ(α) + 1/(1−α) and −ζ′(α) − 1/(1−α)², frozen at 30 digits
    let refs: [(i64, i64, f64, f64); 5] = [
        (1, 10, 0.508073591254869395862679172848, -0.0804027471248139136735398840441),
        (3, 10, 0.524012171317444581420695276738, -0.0789554664407303978874055443577),
        (1, 2, 0.539645491190413187110500847485, -0.0773538607908482725284685532854),
        (7, 10, 0.554944887779637280579362801137, -0.0756198053648257816491669671829),
        (9, 10, 0.56988598059774762770115021242, -0.0737742217843057432803019167706),
    ];
    for (num, den, c1_ref, c2_ref) in refs {
        let alpha = Enclosure::from_ratio(num, den);
        let c1 = c1_constant(alpha);
        let c2 = c2_constant(alpha);
        assert!(c1.width() <= 1e-6, "C1 width {} at {num}/{den}", c1.width());
        assert!(c2.width() <= 1e-6, "C2 width {} at {num}/{den}", c2.width());
        assert!(c1.contains(c1_ref), "C1 misses reference at {num}/{den}");
        assert!(c2.contains(c2_ref), "C2 misses reference at {num}/{den}");
    }

    let zp2 = zeta_deriv(1, Enclosure::from_int(2), None);
    assert!(zp2.width() <= 1e-9, "zeta'(2) width {}", zp2.width());
    assert!(zp2.contains(-0.9375482543));
}

// ------------------------------------------------------------- 8: mutations

#[test]
fn ten_percent_corruption_is_always_detected() {
    let id = ErrorModel::identity();
    let row0 = &published_table()[0];

    // every corruption of the certified error term moves the first row's
    // margin far past its pinned tolerance (weakest response: the bracket
    // constant at 9.3e-4 against the 2e-4 pin)
    let corruptions = [
        ("W +10%", ErrorModel { w_scale: 1.1, ..id }),
        ("W -10%", ErrorModel { w_scale: 0.9, ..id }),
        ("tail +10%", ErrorModel { tail_scale: 1.1, ..id }),
        ("tail -10%", ErrorModel { tail_scale: 0.9, ..id }),
        ("B +10%", ErrorModel { b_scale: 1.1, ..id }),
        ("B -10%", ErrorModel { b_scale: 0.9, ..id }),
        ("C1 +10%", ErrorModel { c1_scale: 1.1, ..id }),
        ("C1 -10%", ErrorModel { c1_scale: 0.9, ..id }),
    ];
    for (name, model) in corruptions {
        let opts = SearchOptions { model, ..SearchOptions::default() };
        let cert = verify_row_with(row0, Parity::Even, &opts).unwrap();
        let margin = cert.f_star.hi;
        assert!(
            (margin - ROW0_MARGIN).abs() > ROW0_MARGIN_TOL,
            "{name} slipped past the margin pin: {margin}"
        );
    }

    // C1 corruption is also visible structurally, without any pin: the
    // scaled partial-sum enclosure stops containing the direct sum, and
    // the scaled constant stops overlapping its zeta reference
    let alpha = Enclosure::from_ratio(1, 2);
    let x = Enclosure::from_u128(1000);
    let direct = direct_power_sum(1000, 1, 2).to_f64();
    for scale in [1.1, 0.9] {
        let shifted = pagecert::specfun::power_sum_scaled(x, alpha, scale).as_enclosure();
        assert!(
            !shifted.contains(direct),
            "power sum still contains the direct value under C1 x{scale}"
        );
        let c1 = c1_constant(alpha) * Enclosure::point(scale);
        assert!(
            !c1.contains(0.539645491190413187110500847485),
            "scaled C1 still overlaps the zeta reference under x{scale}"
        );
    }
}
