//! Ground-truth checks for the brute-force oracle: the Kronecker symbol,
//! character construction, divisor sums, direct weighted sums, and the
//! decomposition identity that the certification engine rests on.

use pagecert::charbounds::Parity;
use pagecert::criterion::{budget_term, ErrorModel, PrecisionLevel};
use pagecert::dd::Dd;
use pagecert::oracle::{
    check_decomposition, check_decomposition_with, dd_enclosure, direct_l,
    direct_log_power_sum, direct_power_sum, direct_weighted_sum, g_table, g_value, kronecker,
    test_discriminants, OracleError, RealCharacter,
};
use pagecert::rigor::Enclosure;
use pagecert::specfun::tail_f;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

const GRID_DISCRIMINANTS: [i64; 6] = [5, 8, 13, -3, -4, -7];

#[test]
fn kronecker_matches_hand_values() {
    assert_eq!(kronecker(5, 2), -1);
    assert_eq!(kronecker(-4, 3), -1);
    assert_eq!(kronecker(1, 0), 1);
    assert_eq!(kronecker(-1, 0), 1);
    assert_eq!(kronecker(5, 0), 0);
    assert_eq!(kronecker(0, 1), 1);
    assert_eq!(kronecker(0, 3), 0);
    for d in [5i64, 8, 12, -3, -4, -7, 999997] {
        assert_eq!(kronecker(d, 1), 1, "chi({d}) at 1");
    }
    // χ mod 5 is the Legendre symbol: residues {1, 4}
    let chi5: Vec<i32> = (0..5).map(|n| kronecker(5, n)).collect();
    assert_eq!(chi5, [0, 1, -1, -1, 1]);
    // χ mod 8 detects n ≡ ±1 (mod 8)
    let chi8: Vec<i32> = (0..8).map(|n| kronecker(8, n)).collect();
    assert_eq!(chi8, [0, 1, 0, -1, 0, -1, 0, 1]);
    // χ mod 4 detects n mod 4
    let chi4: Vec<i32> = (0..4).map(|n| kronecker(-4, n)).collect();
    assert_eq!(chi4, [0, 1, 0, -1]);
}

#[test]
fn kronecker_is_periodic_and_completely_multiplicative() {
    for d in test_discriminants() {
        let q = d.unsigned_abs();
        for n in 0..=3 * q {
            assert_eq!(kronecker(d, n + q), kronecker(d, n), "period of ({d}|{n})");
            let vanishes = kronecker(d, n) == 0;
            assert_eq!(vanishes, gcd(n, q) > 1, "support of ({d}|{n})");
        }
        for m in 1..=60u64 {
            for n in 1..=60u64 {
                assert_eq!(
                    kronecker(d, m * n),
                    kronecker(d, m) * kronecker(d, n),
                    "({d}|{m}·{n})"
                );
            }
        }
    }
}

#[test]
fn character_construction_validates_fundamentality() {
    for d in test_discriminants() {
        let chi = RealCharacter::new(d).unwrap();
        assert_eq!(chi.discriminant(), d);
        assert_eq!(chi.modulus(), d.unsigned_abs());
        let parity = if d > 0 { Parity::Even } else { Parity::Odd };
        assert_eq!(chi.parity(), parity, "parity of {d}");
        for n in 0..3 * chi.modulus() {
            assert_eq!(chi.eval(n), kronecker(d, n), "table of {d} at {n}");
        }
    }
    // 7 and -5 are 3 mod 4; 9 and 45 are not squarefree; 20 = 4·5 has
    // 5 ≡ 1 (mod 4); -12/4 = -3 ≡ 1 (mod 4); 48 = 4·12 is not squarefree
    for bad in [0i64, 1, -1, 2, -2, 7, -5, 9, 45, 20, -12, 48, 16] {
        assert_eq!(
            RealCharacter::new(bad).unwrap_err(),
            OracleError::NotFundamental(bad),
            "{bad} must be rejected"
        );
    }
}

#[test]
fn divisor_sum_matches_hand_values() {
    let chi = RealCharacter::new(5).unwrap();
    assert_eq!(g_value(&chi, 1), 1);
    assert_eq!(g_value(&chi, 2), 0);
    assert_eq!(g_value(&chi, 3), 0);
    assert_eq!(g_value(&chi, 4), 1);
    assert_eq!(g_value(&chi, 5), 1);
    assert_eq!(g_value(&chi, 10), 0);
    assert_eq!(g_value(&chi, 9), 1);
    assert_eq!(g_value(&chi, 11), 2);
    assert_eq!(g_value(&chi, 25), 1);
}

#[test]
fn divisor_sums_sieve_and_enumerate_identically() {
    for &d in &GRID_DISCRIMINANTS {
        let chi = RealCharacter::new(d).unwrap();
        let table = g_table(&chi, 2000);
        for n in 1..=2000u64 {
            // g_value itself cross-checks divisor enumeration against the
            // prime-power product
            assert_eq!(
                table[n as usize],
                g_value(&chi, n) as i32,
                "g({n}) for discriminant {d}"
            );
        }
    }
}

#[test]
fn divisor_sums_are_nonnegative_and_positive_at_squares() {
    for d in test_discriminants() {
        let chi = RealCharacter::new(d).unwrap();
        let table = g_table(&chi, 10_000);
        for n in 1..=10_000usize {
            assert!(table[n] >= 0, "g({n}) < 0 for discriminant {d}");
        }
        for m in 1..=100u64 {
            assert!(
                g_value(&chi, m * m) >= 1,
                "g({m}²) = 0 for discriminant {d}"
            );
        }
    }
}

#[test]
fn weighted_sum_matches_hand_values() {
    let chi = RealCharacter::new(5).unwrap();
    // empty sum, then a sum whose nonzero terms all vanish
    assert_eq!(direct_weighted_sum(&chi, 1, 1, 20).unwrap().to_f64(), 0.0);
    assert_eq!(direct_weighted_sum(&chi, 3, 0, 1).unwrap().to_f64(), 0.0);
    // at x = 4, τ = 0 only n = 4 contributes: g(4)·ln(4)/4
    let got = direct_weighted_sum(&chi, 4, 0, 1).unwrap();
    let want = Dd::from_i128(4).ln().div(Dd::from_i128(4));
    assert!(got.sub(want).abs().to_f64() < 1e-30);
}

#[test]
fn power_sums_match_frozen_references() {
    let close = |got: Dd, want: &str| {
        let w = Dd::parse(want).unwrap();
        let rel = got.sub(w).abs().to_f64() / w.to_f64();
        assert!(rel < 1e-28, "relative error {rel:.3e} against {want}");
    };
    close(
        direct_power_sum(100, 1, 2),
        "18.5896038247841534223581631093",
    );
    close(
        direct_power_sum(100_000, 3, 10),
        "4516.65076664939735232611848731",
    );
    close(
        direct_log_power_sum(1000, 1, 2),
        "314.425558479650160152624396215",
    );
    close(
        direct_log_power_sum(100, 9, 10),
        "14.4603872929258832872990654427",
    );
}

#[test]
fn decomposition_identity_holds_across_the_grid() {
    let mut checked = 0;
    for &d in &GRID_DISCRIMINANTS {
        let chi = RealCharacter::new(d).unwrap();
        for &x in &[100u64, 1000] {
            for &(tn, td) in &[(1i64, 100i64), (1, 20)] {
                assert_eq!(
                    check_decomposition(&chi, x, tn, td),
                    Ok(true),
                    "identity fails at d = {d}, x = {x}, tau = {tn}/{td}"
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 24);
}

#[test]
fn decomposition_identity_is_modulus_independent() {
    // 999997 = 757·1321 ≡ 1 (mod 4), far above the grid moduli
    let chi = RealCharacter::new(999_997).unwrap();
    assert_eq!(chi.parity(), Parity::Even);
    assert_eq!(g_value(&chi, 6), g_value(&chi, 2) * g_value(&chi, 3));
    assert_eq!(check_decomposition(&chi, 1000, 1, 20), Ok(true));
}

#[test]
fn decomposition_check_rejects_a_weakened_remainder_bound() {
    let weakened = ErrorModel {
        w_scale: 0.1,
        ..ErrorModel::identity()
    };
    // the sharpest grid point: a tenth of W no longer covers the remainder
    let chi = RealCharacter::new(8).unwrap();
    assert_eq!(
        check_decomposition_with(&chi, 100, 1, 20, &weakened),
        Ok(false)
    );
    let mut failures = 0;
    for &d in &GRID_DISCRIMINANTS {
        let chi = RealCharacter::new(d).unwrap();
        for &x in &[100u64, 1000] {
            for &(tn, td) in &[(1i64, 100i64), (1, 20)] {
                if check_decomposition_with(&chi, x, tn, td, &weakened) == Ok(false) {
                    failures += 1;
                }
            }
        }
    }
    assert!(failures >= 1, "no grid point noticed W/10");
}

#[test]
fn weighted_sums_respect_the_budget_floor() {
    // Σ g(n)(log n)n^{τ−1} ≥ −2ζ′(2−2τ) − tail_f(2τ−1, x): the engine's
    // lower-bound budget, checked against ground truth
    for &d in &GRID_DISCRIMINANTS {
        let chi = RealCharacter::new(d).unwrap();
        for &x in &[100u64, 1000, 10_000] {
            for &(tn, td) in &[(1i64, 100i64), (1, 20)] {
                let tau = Enclosure::from_ratio(tn, td);
                let alpha = Enclosure::from_ratio(2 * tn - td, td);
                let floor = budget_term(tau, PrecisionLevel::Standard).lo
                    - tail_f(alpha, Enclosure::from_u128(x.into())).hi;
                let sum = dd_enclosure(direct_weighted_sum(&chi, x, tn, td).unwrap());
                assert!(
                    sum.lo >= floor,
                    "budget floor fails at d = {d}, x = {x}, tau = {tn}/{td}: {} < {floor}",
                    sum.lo
                );
            }
        }
    }
}

#[test]
fn desk_scale_guard_trips() {
    let chi = RealCharacter::new(5).unwrap();
    assert_eq!(
        direct_weighted_sum(&chi, 10_000_001, 1, 20).unwrap_err(),
        OracleError::ResourceLimit {
            x: 10_000_001,
            limit: 10_000_000
        }
    );
}

#[test]
fn direct_l_values_match_closed_forms() {
    let one = Enclosure::one();
    let chi4 = RealCharacter::new(-4).unwrap();
    let quarter_pi = std::f64::consts::PI / 4.0;
    assert!(direct_l(&chi4, one, 20_000).unwrap().contains(quarter_pi));

    let chi5 = RealCharacter::new(5).unwrap();
    let l5 = 0.430408940964004038889433232951;
    let coarse = direct_l(&chi5, one, 20_000).unwrap();
    let fine = direct_l(&chi5, one, 80_000).unwrap();
    assert!(coarse.contains(l5));
    assert!(fine.contains(l5));
    assert!(fine.width() < coarse.width());

    assert_eq!(
        direct_l(&chi5, one, 3).unwrap_err(),
        OracleError::CutoffTooSmall {
            cutoff: 3,
            modulus: 5
        }
    );
}

#[test]
fn l_at_one_is_positive_for_every_test_character() {
    for d in test_discriminants() {
        let chi = RealCharacter::new(d).unwrap();
        let l = direct_l(&chi, Enclosure::one(), 20_000).unwrap();
        assert!(l.strictly_positive(), "L(1) not separated from 0 for {d}");
    }
}
