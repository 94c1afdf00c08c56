//! Special functions under interval arithmetic: the periodic Bernoulli
//! polynomial B₃({t}), ζ and ζ′ enclosures, the order-2 Euler–Maclaurin
//! constants C₁ and C₂, the two weighted partial-sum expansions they feed,
//! and the square-root tail function used by the lower-bound machinery.

use crate::rigor::Enclosure;

/// A value of the form `center + ϑ·radius` with |ϑ| ≤ 1.
#[derive(Clone, Copy, Debug)]
pub struct Theta {
    pub center: Enclosure,
    pub radius: Enclosure,
}

impl Theta {
    pub fn new(center: Enclosure, radius: Enclosure) -> Self {
        assert!(radius.lo >= 0.0, "negative theta radius");
        Theta { center, radius }
    }

    /// Collapse to a plain enclosure: center ± radius.
    pub fn as_enclosure(&self) -> Enclosure {
        Enclosure::new(
            (self.center - self.radius).lo,
            (self.center + self.radius).hi,
        )
    }
}

/// sup |B₃({t})| = √3/36, attained at t ≡ (3 ± √3)/6.
pub fn b3_sup() -> Enclosure {
    Enclosure::from_int(3).sqrt() / Enclosure::from_int(36)
}

/// The Euler–Maclaurin remainder constant κ = 1/(72√3).
pub fn kappa() -> Enclosure {
    Enclosure::one() / (Enclosure::from_int(72) * Enclosure::from_int(3).sqrt())
}

/// B₃({t}) = {t}³ − (3/2){t}² + (1/2){t} for t ≥ 0.
pub fn bernoulli3_fractional(t: Enclosure) -> Enclosure {
    assert!(t.lo >= 0.0, "bernoulli3_fractional needs t >= 0");
    let cap = b3_sup();
    let capped = Enclosure::new(-cap.hi, cap.hi);
    let k = t.lo.floor();
    if t.hi - k > 1.0 {
        // spans a period boundary: the global bound is all we can say
        return capped;
    }
    let u = t - Enclosure::point(k);
    let half = Enclosure::from_ratio(1, 2);
    let three_half = Enclosure::from_ratio(3, 2);
    let cubic = u * u * u - three_half * u * u + half * u;
    // both `cubic` and `capped` contain the value; intersect them
    Enclosure::new(cubic.lo.max(capped.lo), cubic.hi.min(capped.hi))
}

/// ζ(s) (order 0) or ζ′(s) (order 1) by truncated Dirichlet series plus an
/// integral-comparison tail; requires s.lo > 1.05 so the tail formulas and
/// the monotonicity of the integrands are uniform.
pub fn zeta_deriv(order: u32, s: Enclosure, cutoff: Option<u64>) -> Enclosure {
    assert!(order <= 1, "only orders 0 and 1 supported");
    assert!(s.lo > 1.05, "zeta_deriv needs s > 1.05");
    let n = cutoff.unwrap_or(4096);
    // z = n+1 ≥ 5 keeps f decreasing and f'' single-signed for both
    // integrands, so the summed Euler–Maclaurin remainder is |f'(z)|/12
    assert!(n >= 4, "cutoff too small for tail monotonicity");
    let mut sum = Enclosure::zero();
    for k in 1..=n {
        let kk = Enclosure::from_u128(u128::from(k));
        let lnk = if k == 1 { Enclosure::zero() } else { kk.ln() };
        let term = (s.neg() * lnk).exp();
        sum = sum + if order == 0 { term } else { lnk * term };
    }
    // Σ_{k>n} f(k) = ∫_z^∞ f + f(z)/2 − f'(z)/12 + ϑ|f'(z)|/12 at z = n+1
    let z = Enclosure::from_u128(u128::from(n + 1));
    let lnz = z.ln();
    let sm1 = s - Enclosure::one();
    let one = Enclosure::one();
    let zpow = (-s * lnz).exp();
    let (integral, fz, fpz) = if order == 0 {
        (z * zpow / sm1, zpow, -s * zpow / z)
    } else {
        (
            z * zpow * (lnz / sm1 + one / (sm1 * sm1)),
            lnz * zpow,
            (one - s * lnz) * zpow / z,
        )
    };
    let r = (fpz.abs() / Enclosure::from_int(12)).hi;
    let tail = integral + fz / Enclosure::from_int(2) - fpz / Enclosure::from_int(12)
        + Enclosure::new(-r, r);
    let total = sum + tail;
    if order == 0 {
        total
    } else {
        -total
    }
}

// ---------------------------------------------------------------------
// The order-2 Euler–Maclaurin constants.
//
// Both are 1/6 times integrals of B₃({t}) against derivatives of t^{-α}
// and (log t)t^{-α}; writing s = α + 3,
//   I₀(s) = ∫₁^∞ B₃({t}) t^{-s} dt,
//   I₁(s) = ∫₁^∞ B₃({t}) t^{-s} log t dt,
// the collected forms are
//   C₁(α) = 1/2 + α/12 − (α(α+1)(α+2)/6)·I₀,
//   C₂(α) = −1/12 + (1/6)[((α+2)(2α+1) + α(α+1))·I₀ − α(α+1)(α+2)·I₁].
// Cross-checked against C₁(α) = ζ(α) + 1/(1−α) and
// C₂(α) = −ζ′(α) − 1/(1−α)² (acceptance identities).
//
// The integrals are evaluated per unit period. For m ≤ 16 the cubic
// B₃(t − m) is expanded in t and each piece integrated exactly. Beyond
// that the binomial moment series around t = m converges geometrically
// and the truncation is capped by a Cauchy estimate on the circle
// |z| = 1/8.

const MOMENT_TERMS: usize = 24;

/// M_k = ∫₀¹ B₃(u) u^k du, exact rational.
fn b3_moment(k: i64) -> Enclosure {
    Enclosure::from_ratio(1, k + 4)
        - Enclosure::from_ratio(3, 2 * (k + 3))
        + Enclosure::from_ratio(1, 2 * (k + 2))
}

/// Q(w) = ∫₀¹ e^{wu} du and R(w) = ∫₀¹ u e^{wu} du at a point, by series
/// with a factorial tail cap. Entire functions, so no small-denominator
/// trouble anywhere.
fn qr_point(w: f64) -> (Enclosure, Enclosure) {
    assert!(w.abs() <= 2.5, "qr_point expects |w| <= 2.5, got {w}");
    const TERMS: i64 = 26;
    let we = Enclosure::point(w);
    let mut pk = Enclosure::one(); // w^k / k!
    let mut q = Enclosure::zero();
    let mut r = Enclosure::zero();
    for k in 0..TERMS {
        q = q + pk / Enclosure::from_int(k + 1);
        r = r + pk / Enclosure::from_int(k + 2);
        pk = pk * we / Enclosure::from_int(k + 1);
    }
    // |Σ_{k≥K} w^k/(k!(k+1))| ≤ (|w|^K/K!)·e^{|w|}/(K+1), R likewise
    let cap = (pk.abs() * Enclosure::point(w.abs()).exp() / Enclosure::from_int(TERMS + 1)).hi;
    (
        q + Enclosure::new(-cap, cap),
        r + Enclosure::new(-cap, cap),
    )
}

/// Q and R over an interval: both integrands increase pointwise in w.
fn qr_series(w: Enclosure) -> (Enclosure, Enclosure) {
    let (q_lo, r_lo) = qr_point(w.lo);
    let (q_hi, r_hi) = qr_point(w.hi);
    (
        Enclosure::new(q_lo.lo, q_hi.hi.max(q_lo.hi)),
        Enclosure::new(r_lo.lo, r_hi.hi.max(r_lo.hi)),
    )
}

/// Both period integrals over [m, m+1], exactly: substituting t = m·e^v
/// turns each ∫ t^{e−1} dt piece into m^e·ΔL·Q(eΔL) and the log-weighted
/// piece into m^e(L·ΔL·Q + ΔL²·R), with ΔL = log(1 + 1/m). Cancellation
/// free, so wide s-enclosures stay tight even as e = 4 − s → 0.
fn period_exact(m: i64, s: Enclosure) -> (Enclosure, Enclosure) {
    let a = [
        -Enclosure::from_int(m * (m + 1) * (2 * m + 1)) / Enclosure::from_int(2),
        Enclosure::from_int(6 * m * m + 6 * m + 1) / Enclosure::from_int(2),
        -Enclosure::from_int(6 * m + 3) / Enclosure::from_int(2),
        Enclosure::one(),
    ];
    let t1 = Enclosure::from_int(m);
    let l1 = if m == 1 { Enclosure::zero() } else { t1.ln() };
    let dl = (Enclosure::from_int(m + 1) / t1).ln();
    let mut p0 = Enclosure::zero();
    let mut p1 = Enclosure::zero();
    for (j, aj) in a.iter().enumerate() {
        let e = Enclosure::from_int(j as i64 + 1) - s; // j+1-s, never 0
        let (q, r) = qr_series(e * dl);
        let tp = (e * l1).exp(); // m^e
        p0 = p0 + *aj * tp * dl * q;
        p1 = p1 + *aj * tp * (l1 * dl * q + dl * dl * r);
    }
    (p0, p1)
}

/// z-polynomial coefficients of (1+z)^{-s} (binomials) and of
/// (1+z)^{-s}·log(1+z) (their Cauchy product with the log series).
fn moment_coefficients(s: Enclosure) -> (Vec<Enclosure>, Vec<Enclosure>) {
    let mut b = Vec::with_capacity(MOMENT_TERMS + 1);
    b.push(Enclosure::one());
    for k in 0..MOMENT_TERMS {
        let kk = Enclosure::from_int(k as i64);
        let next = b[k] * (s.neg() - kk) / (kk + Enclosure::one());
        b.push(next);
    }
    let mut d = Vec::with_capacity(MOMENT_TERMS + 1);
    d.push(Enclosure::zero());
    for k in 1..=MOMENT_TERMS {
        let mut acc = Enclosure::zero();
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = acc + Enclosure::from_ratio(sign, j as i64) * b[k - j];
        }
        d.push(acc);
    }
    (b, d)
}

struct MomentEval {
    poly0: Vec<Enclosure>, // b_k · M_k
    poly1: Vec<Enclosure>, // d_k · M_k
    cap0: Enclosure,       // Cauchy cap for the b-series
    cap1: Enclosure,       // Cauchy cap for the d-series
}

fn moment_setup(s: Enclosure) -> MomentEval {
    let (b, d) = moment_coefficients(s);
    let poly0: Vec<_> = (0..=MOMENT_TERMS)
        .map(|k| b[k] * b3_moment(k as i64))
        .collect();
    let poly1: Vec<_> = (0..=MOMENT_TERMS)
        .map(|k| d[k] * b3_moment(k as i64))
        .collect();
    // |coeff_k| ≤ cap · 8^k by the Cauchy estimate on |z| = 1/8, where the
    // function magnitudes are (8/7)^s and (8/7)^s·log(8/7)
    let cap0 = (Enclosure::from_ratio(8, 7).ln() * s).exp();
    let cap1 = cap0 * Enclosure::from_ratio(8, 7).ln();
    MomentEval {
        poly0,
        poly1,
        cap0: Enclosure::point(cap0.hi),
        cap1: Enclosure::point(cap1.hi),
    }
}

fn horner(poly: &[Enclosure], z: Enclosure) -> Enclosure {
    let mut acc = Enclosure::zero();
    for c in poly.iter().rev() {
        acc = acc * z + *c;
    }
    acc
}

/// Period integrals over [m, m+1] for m ≥ 17 via the moment series.
fn period_moment(m: u64, s: Enclosure, ev: &MomentEval) -> (Enclosure, Enclosure) {
    let me = Enclosure::from_u128(u128::from(m));
    let lnm = me.ln();
    let z = Enclosure::one() / me;
    let mpow = (s.neg() * lnm).exp();
    // geometric truncation cap: remaining |M_k| ≤ b3_sup/(K+2)
    let eight_z = Enclosure::from_int(8) * z;
    assert!(eight_z.hi < 1.0);
    let geo = eight_z.powi(MOMENT_TERMS as u32 + 1) / (Enclosure::one() - eight_z);
    let mcap = b3_sup() / Enclosure::from_int(MOMENT_TERMS as i64 + 2);
    let rad0 = (ev.cap0 * mcap * geo).hi;
    let rad1 = (ev.cap1 * mcap * geo).hi;
    let ser0 = horner(&ev.poly0, z) + Enclosure::new(-rad0, rad0);
    let ser1 = horner(&ev.poly1, z) + Enclosure::new(-rad1, rad1);
    (mpow * ser0, mpow * (lnm * ser0 + ser1))
}

/// I₀ and I₁ enclosures for s = α + 3, truncated at t = cutoff with the
/// sup-norm tail appended.
fn em_integrals(s: Enclosure, cutoff: u64) -> (Enclosure, Enclosure) {
    assert!(s.lo > 3.0 && s.hi < 4.0, "s = alpha + 3 with alpha in (0,1)");
    assert!(cutoff >= 18, "cutoff too small");
    let mut i0 = Enclosure::zero();
    let mut i1 = Enclosure::zero();
    for m in 1..=16.min(cutoff - 1) {
        let (p0, p1) = period_exact(m as i64, s);
        i0 = i0 + p0;
        i1 = i1 + p1;
    }
    let ev = moment_setup(s);
    for m in 17..cutoff {
        let (p0, p1) = period_moment(m, s, &ev);
        i0 = i0 + p0;
        i1 = i1 + p1;
    }
    // |∫_N^∞| ≤ (√3/36)·N^{1-s}/(s-1), log version gains 1/(s-1)²
    let ne = Enclosure::from_u128(u128::from(cutoff));
    let lnn = ne.ln();
    let sm1 = s - Enclosure::one();
    let npow = ((Enclosure::one() - s) * lnn).exp();
    let t0 = (b3_sup() * npow / sm1).hi;
    let t1 = (b3_sup() * npow * (lnn / sm1 + Enclosure::one() / (sm1 * sm1))).hi;
    (
        i0 + Enclosure::new(-t0, t0),
        i1 + Enclosure::new(-t1, t1),
    )
}

pub const DEFAULT_EM_CUTOFF: u64 = 10_000;

/// C₁(α): the constant term of the order-2 expansion of Σ_{n≤x} n^{-α}.
/// Satisfies C₁(α) = ζ(α) + 1/(1−α).
pub fn c1_constant(alpha: Enclosure) -> Enclosure {
    c1_constant_n(alpha, DEFAULT_EM_CUTOFF)
}

pub fn c1_constant_n(alpha: Enclosure, cutoff: u64) -> Enclosure {
    assert!(alpha.lo > 0.0 && alpha.hi < 1.0, "alpha must lie in (0,1)");
    let s = alpha + Enclosure::from_int(3);
    let (i0, _) = em_integrals(s, cutoff);
    let a = alpha;
    let prod = a * (a + Enclosure::one()) * (a + Enclosure::from_int(2));
    Enclosure::from_ratio(1, 2) + a / Enclosure::from_int(12)
        - prod * i0 / Enclosure::from_int(6)
}

/// C₂(α): the constant term of the order-2 expansion of Σ_{n≤x} (log n)n^{-α}.
/// Satisfies C₂(α) = −ζ′(α) − 1/(1−α)².
pub fn c2_constant(alpha: Enclosure) -> Enclosure {
    c2_constant_n(alpha, DEFAULT_EM_CUTOFF)
}

pub fn c2_constant_n(alpha: Enclosure, cutoff: u64) -> Enclosure {
    assert!(alpha.lo > 0.0 && alpha.hi < 1.0, "alpha must lie in (0,1)");
    let s = alpha + Enclosure::from_int(3);
    let (i0, i1) = em_integrals(s, cutoff);
    let a = alpha;
    let one = Enclosure::one();
    let two = Enclosure::from_int(2);
    let w0 = (a + two) * (two * a + one) + a * (a + one);
    let w1 = a * (a + one) * (a + two);
    -Enclosure::from_ratio(1, 12) + (w0 * i0 - w1 * i1) / Enclosure::from_int(6)
}

/// Σ_{n≤x} n^{-α} as main terms plus an explicit ϑ-remainder.
///
/// The radius (α(α+1)/(72√3))·x^{-α-2} is the order-2 Euler–Maclaurin
/// remainder cap; validated by direct-sum containment at desk scale.
pub fn power_sum(x: Enclosure, alpha: Enclosure) -> Theta {
    power_sum_scaled(x, alpha, 1.0)
}

/// Test hook: same expansion with the C₁ constant scaled (mutation tests).
pub fn power_sum_scaled(x: Enclosure, alpha: Enclosure, c1_scale: f64) -> Theta {
    assert!(x.lo >= 1.0, "power_sum needs x >= 1");
    let a = alpha;
    let one = Enclosure::one();
    let lx = x.ln();
    let c1 = c1_constant(a) * Enclosure::point(c1_scale);
    let x1ma = ((one - a) * lx).exp();
    let xma = (a.neg() * lx).exp();
    let center = c1
        + (x1ma - one) / (one - a)
        + xma / Enclosure::from_int(2)
        - a * xma / (x * Enclosure::from_int(12));
    let radius = a * (a + one) * kappa() * xma / (x * x);
    Theta::new(center, Enclosure::point(radius.hi.max(0.0)))
}

/// Σ_{n≤x} (log n) n^{-α} as main terms plus an explicit ϑ-remainder.
pub fn log_power_sum(x: Enclosure, alpha: Enclosure) -> Theta {
    log_power_sum_scaled(x, alpha, 1.0)
}

pub fn log_power_sum_scaled(x: Enclosure, alpha: Enclosure, c2_scale: f64) -> Theta {
    assert!(x.lo >= 1.0, "log_power_sum needs x >= 1");
    let a = alpha;
    let one = Enclosure::one();
    let kap = kappa();
    let lx = x.ln();
    let c2 = c2_constant(a) * Enclosure::point(c2_scale);
    let x1ma = ((one - a) * lx).exp();
    let xma = (a.neg() * lx).exp();
    let oma = one - a;
    let center = x1ma * lx / oma + (one - x1ma) / (oma * oma)
        + xma * lx / Enclosure::from_int(2)
        + c2;
    let r = (xma / x)
        * (a * (one + kap) * lx
            + one
            + (Enclosure::from_int(3) * a + one) * kap / (a + one));
    Theta::new(center, Enclosure::point(r.hi.max(0.0)))
}

/// The square-root tail term: 2·u^α(1 − α·log u)/α² at u = √x − 1,
/// bounding 2·Σ_{m > √x−1} (log m)·m^α for α < 0.
pub fn tail_f(alpha: Enclosure, x: Enclosure) -> Enclosure {
    assert!(x.lo > 4.0, "tail_f needs x > 4");
    tail_f_at(alpha, x.sqrt() - Enclosure::one())
}

/// Same expression at a caller-chosen evaluation point u > 1.
pub fn tail_f_at(alpha: Enclosure, u: Enclosure) -> Enclosure {
    assert!(
        !alpha.contains_zero(),
        "tail_f alpha interval must exclude zero"
    );
    assert!(u.lo > 1.0, "tail_f_at needs u > 1");
    let lnu = u.ln();
    let upow = (alpha * lnu).exp();
    Enclosure::from_int(2) * upow * (Enclosure::one() - alpha * lnu) / (alpha * alpha)
}

/// The printed simplified variant, evaluated at u = √x instead of √x − 1.
/// Kept for literal reproduction only: it omits one boundary term and is
/// not used by the certification path.
pub fn tail_f_simplified(alpha: Enclosure, x: Enclosure) -> Enclosure {
    assert!(x.lo > 4.0, "tail_f needs x > 4");
    tail_f_at(alpha, x.sqrt())
}
