//! Brute-force ground truth at desk scale: real primitive characters via
//! the Kronecker symbol, the divisor sum g(n) = Σ_{d|n} χ(d), direct
//! high-precision evaluations of the weighted sums the engine bounds, and
//! containment checks gating every derived formula.

use crate::charbounds::Parity;
use crate::criterion::{k_coefficients_with, w_term, ErrorModel, PrecisionLevel};
use crate::dd::Dd;
use crate::rigor::Enclosure;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Not a fundamental discriminant of a real primitive character.
    NotFundamental(i64),
    /// Desk-scale guard exceeded.
    ResourceLimit { x: u64, limit: u64 },
    /// Truncation point below the character's period.
    CutoffTooSmall { cutoff: u64, modulus: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::NotFundamental(d) => {
                write!(f, "{d} is not a fundamental discriminant")
            }
            OracleError::ResourceLimit { x, limit } => {
                write!(f, "x = {x} exceeds the desk-scale limit {limit}")
            }
            OracleError::CutoffTooSmall { cutoff, modulus } => {
                write!(f, "cutoff {cutoff} is below the modulus {modulus}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// The Kronecker symbol (d | n), the standard realization of real
/// characters. Completely multiplicative and |d|-periodic in n when d is
/// a fundamental discriminant.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut a = d;
    let mut b = i64::try_from(n).expect("n fits in i64");
    if b == 0 {
        return i32::from(a.unsigned_abs() == 1);
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    // (-1)^((x²-1)/8) for odd x
    let tab2 = |x: i64| -> i32 {
        match x.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        }
    };
    let mut v = 0u32;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 { 1 } else { tab2(a) };
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let mut v = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= tab2(b);
        }
        // reciprocity flips the sign when both are 3 mod 4; the bit test
        // is exact in two's complement for negative a as well
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

fn squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// A real primitive character, held as its full period table. Immutable
/// after construction and freely shareable.
#[derive(Clone, Debug)]
pub struct RealCharacter {
    discriminant: i64,
    modulus: u64,
    values: Vec<i8>,
}

impl RealCharacter {
    /// Builds χ = (d | ·) after checking that d is fundamental: d ≡ 1
    /// (mod 4) squarefree, or d = 4m with m ≡ 2, 3 (mod 4) squarefree;
    /// |d| ≥ 3 keeps the character non-principal.
    pub fn new(d: i64) -> Result<Self, OracleError> {
        let fundamental = if d == 0 || d.unsigned_abs() < 3 {
            false
        } else if d.rem_euclid(4) == 1 {
            squarefree(d.unsigned_abs())
        } else if d % 4 == 0 {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        } else {
            false
        };
        if !fundamental {
            return Err(OracleError::NotFundamental(d));
        }
        let modulus = d.unsigned_abs();
        let values = (0..modulus).map(|r| kronecker(d, r) as i8).collect();
        Ok(RealCharacter {
            discriminant: d,
            modulus,
            values,
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// χ(−1) = sign of the discriminant.
    pub fn parity(&self) -> Parity {
        if self.discriminant > 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn eval(&self, n: u64) -> i32 {
        self.values[(n % self.modulus) as usize] as i32
    }
}

/// g(n) = Σ_{d|n} χ(d), evaluated independently by divisor enumeration
/// and by the product over prime powers; the routes must agree, and the
/// product form shows each factor is nonnegative.
pub fn g_value(chi: &RealCharacter, n: u64) -> u32 {
    assert!(n >= 1);
    let mut by_divisors: i64 = 0;
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            by_divisors += i64::from(chi.eval(i));
            let j = n / i;
            if j != i {
                by_divisors += i64::from(chi.eval(j));
            }
        }
        i += 1;
    }

    // 1 + χ(p) + ... + χ(p^e) collapses by the value of χ(p)
    let factor = |c: i32, e: u32| -> i64 {
        match c {
            0 => 1,
            1 => i64::from(e) + 1,
            _ => i64::from(e % 2 == 0),
        }
    };
    let mut by_primes: i64 = 1;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            by_primes *= factor(chi.eval(p), e);
        }
        p += 1;
    }
    if m > 1 {
        by_primes *= factor(chi.eval(m), 1);
    }

    assert_eq!(
        by_divisors, by_primes,
        "divisor and prime-power evaluations of g({n}) disagree"
    );
    u32::try_from(by_primes).expect("g is a product of nonnegative factors")
}

/// g(1..=x) by sieving multiples of each d with χ(d) ≠ 0; index 0 unused.
pub fn g_table(chi: &RealCharacter, x: u64) -> Vec<i32> {
    let len = usize::try_from(x + 1).expect("table fits in memory");
    let mut g = vec![0i32; len];
    for d in 1..=x {
        let c = chi.eval(d);
        if c != 0 {
            let mut m = d as usize;
            while m < len {
                g[m] += c;
                m += d as usize;
            }
        }
    }
    g
}

/// Pairwise (binary counter) summation: error grows with log of the term
/// count instead of the count, keeping 30 significant digits at 10⁷ terms.
struct PairwiseSum {
    levels: Vec<Option<Dd>>,
}

impl PairwiseSum {
    fn new() -> Self {
        PairwiseSum { levels: Vec::new() }
    }

    fn push(&mut self, mut v: Dd) {
        for slot in self.levels.iter_mut() {
            match slot.take() {
                None => {
                    *slot = Some(v);
                    return;
                }
                Some(u) => v = v.add(u),
            }
        }
        self.levels.push(Some(v));
    }

    fn total(self) -> Dd {
        self.levels
            .into_iter()
            .flatten()
            .fold(Dd::ZERO, |acc, v| acc.add(v))
    }
}

const DESK_LIMIT: u64 = 10_000_000;

/// Σ_{n≤x} g(n)·log n·n^{τ−1} in double-double arithmetic, exact to at
/// least 30 significant digits. τ is passed as an exact rational.
pub fn direct_weighted_sum(
    chi: &RealCharacter,
    x: u64,
    tau_num: i64,
    tau_den: i64,
) -> Result<Dd, OracleError> {
    if x > DESK_LIMIT {
        return Err(OracleError::ResourceLimit { x, limit: DESK_LIMIT });
    }
    let e = Dd::from_ratio(tau_num, tau_den).sub(Dd::ONE);
    let g = g_table(chi, x);
    let mut acc = PairwiseSum::new();
    for n in 2..=x {
        let gn = g[n as usize];
        if gn == 0 {
            continue;
        }
        let ln_n = Dd::from_i128(n.into()).ln();
        let term = Dd::from_f64(f64::from(gn))
            .mul(ln_n)
            .mul(e.mul(ln_n).exp());
        acc.push(term);
    }
    Ok(acc.total())
}

/// Σ_{n≤x} n^{−α} at double-double precision.
pub fn direct_power_sum(x: u64, alpha_num: i64, alpha_den: i64) -> Dd {
    let e = Dd::from_ratio(alpha_num, alpha_den).neg();
    let mut acc = PairwiseSum::new();
    acc.push(Dd::ONE);
    for n in 2..=x {
        acc.push(e.mul(Dd::from_i128(n.into()).ln()).exp());
    }
    acc.total()
}

/// Σ_{n≤x} (log n)·n^{−α} at double-double precision.
pub fn direct_log_power_sum(x: u64, alpha_num: i64, alpha_den: i64) -> Dd {
    let e = Dd::from_ratio(alpha_num, alpha_den).neg();
    let mut acc = PairwiseSum::new();
    for n in 2..=x {
        let ln_n = Dd::from_i128(n.into()).ln();
        acc.push(ln_n.mul(e.mul(ln_n).exp()));
    }
    acc.total()
}

/// A double-double value as a thin enclosure, padded well past its own
/// rounding error.
pub fn dd_enclosure(v: Dd) -> Enclosure {
    let f = v.to_f64();
    let pad = f.abs() * 1e-15 + 1e-300;
    Enclosure::new(f - pad, f + pad)
}

/// The decomposition identity behind the whole engine, checked at desk
/// scale: the direct weighted sum must land within ±W of the main-term
/// assembly built from the truncated character sums
///
///   M = −K₁·Σχ(d)(log d)d^{τ−1} + K₂·Σχ(d)d^{τ−1}
///       − (x^τ/τ)(1/τ − log x)·Σχ(d)/d
///       − ((1−τ)/12)x^{τ−2}·Σχ(d)d·log d
///       + (x^{τ−1}(log x)/2)·Σχ(d),
///
/// with all sums over d ≤ x and W the summation remainder bound at
/// x_ref = max(4, √x).
pub fn check_decomposition(
    chi: &RealCharacter,
    x: u64,
    tau_num: i64,
    tau_den: i64,
) -> Result<bool, OracleError> {
    check_decomposition_with(chi, x, tau_num, tau_den, &ErrorModel::identity())
}

pub fn check_decomposition_with(
    chi: &RealCharacter,
    x: u64,
    tau_num: i64,
    tau_den: i64,
    model: &ErrorModel,
) -> Result<bool, OracleError> {
    assert!(x >= 16, "decomposition check needs x >= 16");
    let lhs = dd_enclosure(direct_weighted_sum(chi, x, tau_num, tau_den)?);

    let tau = Enclosure::from_ratio(tau_num, tau_den);
    let one = Enclosure::one();
    let mut a_sum = Enclosure::zero();
    let mut b_sum = Enclosure::zero();
    let mut c_sum = Enclosure::zero();
    let mut d_sum = Enclosure::zero();
    let mut e_sum = Enclosure::zero();
    for d in 1..=x {
        let c = chi.eval(d);
        if c == 0 {
            continue;
        }
        let sign = Enclosure::from_int(c.into());
        let de = Enclosure::from_u128(d.into());
        let ln_d = de.ln();
        let pow = ((tau - one) * ln_d).exp();
        a_sum = a_sum + sign * ln_d * pow;
        b_sum = b_sum + sign * pow;
        c_sum = c_sum + sign / de;
        d_sum = d_sum + sign * de * ln_d;
        e_sum = e_sum + sign;
    }

    let (k1, k2) = k_coefficients_with(tau, PrecisionLevel::Standard, model.c1_scale);
    let xe = Enclosure::from_u128(x.into());
    let l = xe.ln();
    let x_tau = (tau * l).exp();
    let m = k2 * b_sum - k1 * a_sum
        - (x_tau / tau) * (tau.recip() - l) * c_sum
        - ((one - tau) / Enclosure::from_int(12)) * ((tau - Enclosure::from_int(2)) * l).exp()
            * d_sum
        + ((tau - one) * l).exp() * l / Enclosure::from_int(2) * e_sum;

    let x_ref = Enclosure::from_int(4).max(xe.sqrt());
    let w = w_term(xe, tau, x_ref) * Enclosure::point(model.w_scale);
    Ok(lhs.hi <= (m + w).hi && lhs.lo >= (m - w).lo)
}

/// Enclosure of L(s, χ) from a truncated sum plus the trivial partial
/// summation tail 2q·cutoff^{−s}; the width shrinks to zero in the cutoff.
pub fn direct_l(chi: &RealCharacter, s: Enclosure, cutoff: u64) -> Result<Enclosure, OracleError> {
    assert!(s.lo > 0.0, "direct_l needs s > 0");
    if cutoff < chi.modulus() {
        return Err(OracleError::CutoffTooSmall {
            cutoff,
            modulus: chi.modulus(),
        });
    }
    let mut partial = Enclosure::zero();
    for n in 1..=cutoff {
        let c = chi.eval(n);
        if c == 0 {
            continue;
        }
        let term = (s.neg() * Enclosure::from_u128(n.into()).ln()).exp();
        partial = partial + Enclosure::from_int(c.into()) * term;
    }
    let tail = (Enclosure::from_int(2)
        * Enclosure::from_u128(chi.modulus().into())
        * (s.neg() * Enclosure::from_u128(cutoff.into()).ln()).exp())
    .hi;
    Ok(partial + Enclosure::new(-tail, tail))
}

/// The twenty fundamental discriminants the test harness exercises, ten
/// of each parity.
pub fn test_discriminants() -> [i64; 20] {
    [
        5, 8, 12, 13, 17, 21, 24, 28, 29, 33, -3, -4, -7, -8, -11, -15, -19, -20, -23, -24,
    ]
}
