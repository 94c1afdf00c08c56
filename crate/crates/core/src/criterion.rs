//! The contradiction functional F(q, τ, x) and its certification: assembles
//! the Euler–Maclaurin cap W, the truncation error E, the L(1,χ) lower-bound
//! bracket, and the ζ′ budget, then proves F < 0 over whole (q, τ) boxes by
//! adaptive subdivision with an algebraic closure below a small-τ floor.

use crate::charbounds::{pv_constant, pv_constant_pomerance, ModulusRange, Parity};
use crate::rigor::Enclosure;
use crate::specfun::{b3_sup, c1_constant_n, c2_constant_n, kappa, tail_f, tail_f_simplified, zeta_deriv};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Working precision for the τ-dependent constants; trades enclosure width
/// against evaluation cost. All levels are rigorous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrecisionLevel {
    Fast,
    Standard,
    High,
}

impl PrecisionLevel {
    /// Cutoff for the Euler–Maclaurin constant integrals inside K₁, K₂.
    fn em_cutoff(self) -> u64 {
        match self {
            PrecisionLevel::Fast => 48,
            PrecisionLevel::Standard => 64,
            PrecisionLevel::High => 512,
        }
    }

    /// Dirichlet-series cutoff for the ζ′(2−2τ) budget.
    fn zeta_cutoff(self) -> u64 {
        match self {
            PrecisionLevel::Fast => 1000,
            PrecisionLevel::Standard => 3000,
            PrecisionLevel::High => 20000,
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "fast" => Some(PrecisionLevel::Fast),
            "standard" => Some(PrecisionLevel::Standard),
            "high" => Some(PrecisionLevel::High),
            _ => None,
        }
    }
}

/// Multiplicative perturbations of the four independently derived bound
/// constituents. Identity in production; the mutation tests inject ±10%
/// here to confirm each constituent is load-bearing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModel {
    pub w_scale: f64,
    pub tail_scale: f64,
    pub b_scale: f64,
    pub c1_scale: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        ErrorModel {
            w_scale: 1.0,
            tail_scale: 1.0,
            b_scale: 1.0,
            c1_scale: 1.0,
        }
    }
}

impl ErrorModel {
    pub fn identity() -> Self {
        Self::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigError {
    /// c·log x exceeds log q_lo: the τ⁻¹ ≥ log x side condition would fail
    /// at the τ-wall.
    SideCondition,
    /// x below the floor, or the floor below 4.
    XFloor,
    /// Degenerate search parameters.
    BadParameter,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::SideCondition => write!(f, "log x exceeds log(q_lo)/c"),
            ConfigError::XFloor => write!(f, "x below floor or floor below 4"),
            ConfigError::BadParameter => write!(f, "degenerate configuration parameter"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// One candidate certificate: a modulus range with the exceptional-zero
/// constant c (in thousandths) and the witness log₁₀ x (in hundredths).
/// Integer fields keep table values exact and reports reproducible.
#[derive(Clone, Copy, Debug)]
pub struct CandidateConfig {
    pub range: ModulusRange,
    pub c_milli: u32,
    pub log10_x_centi: u32,
    pub x_floor: f64,
    pub max_depth: u32,
    pub tau_floor_exponent: f64,
    pub pomerance: bool,
    pub simplified_tail: bool,
    pub precision: PrecisionLevel,
    pub model: ErrorModel,
}

impl CandidateConfig {
    pub fn new(range: ModulusRange, c_milli: u32, log10_x_centi: u32) -> Self {
        CandidateConfig {
            range,
            c_milli,
            log10_x_centi,
            x_floor: 4.0,
            max_depth: 40,
            tau_floor_exponent: -4.0,
            pomerance: false,
            simplified_tail: false,
            precision: PrecisionLevel::Standard,
            model: ErrorModel::identity(),
        }
    }

    pub fn c_value(&self) -> Enclosure {
        Enclosure::from_ratio(self.c_milli as i64, 1000)
    }

    pub fn log10_x(&self) -> Enclosure {
        Enclosure::from_ratio(self.log10_x_centi as i64, 100)
    }

    pub fn ln_x(&self) -> Enclosure {
        self.log10_x() * Enclosure::from_int(10).ln()
    }

    pub fn x_value(&self) -> Enclosure {
        self.ln_x().exp()
    }

    pub fn tau_floor(&self) -> f64 {
        10f64.powf(self.tau_floor_exponent)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.c_milli == 0 || self.max_depth == 0 || self.log10_x_centi == 0 {
            return Err(ConfigError::BadParameter);
        }
        let tf = self.tau_floor();
        if !(tf > 0.0 && tf <= 0.01) {
            return Err(ConfigError::BadParameter);
        }
        if !(self.x_floor >= 4.0) || self.x_value().lo < self.x_floor {
            return Err(ConfigError::XFloor);
        }
        // c·log x ≤ log q_lo, checked rigorously
        let lhs = self.c_value() * self.ln_x();
        let rhs = Enclosure::from_u128(self.range.q_lo).ln();
        if lhs.hi > rhs.lo {
            return Err(ConfigError::SideCondition);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Certified,
    Failed,
    Inconclusive,
}

/// Outcome of a certification run over one configuration.
#[derive(Clone, Copy, Debug)]
pub struct VerificationCertificate {
    pub config: CandidateConfig,
    pub status: Status,
    /// The (q, τ) box that bounds the certificate: the certified leaf with
    /// the largest F upper end, or the box that failed.
    pub worst_cell: (Enclosure, Enclosure),
    /// F-enclosure at the worst cell (its winning witness x).
    pub f_star: Enclosure,
    pub cells_examined: u64,
    /// Set by the table layer when the published c was lowered to restore
    /// the side condition; holds the original value in thousandths.
    pub reduced_from: Option<u32>,
}

// ---------------------------------------------------------------- W term

/// The printed Euler–Maclaurin cap, with the x₀-dependent factors taken at
/// x_ref. Valid for τ in [0, 1/2); callers outside the τ → 0 closure go
/// through `w_term` which enforces the stated domain.
fn w_raw(x: Enclosure, tau: Enclosure, x_ref: Enclosure) -> Enclosure {
    let one = Enclosure::one();
    let two = Enclosure::from_int(2);
    let l = x.ln();
    let xt = (tau * l).exp();
    let kap = kappa();
    let s432 = Enclosure::from_int(432) * Enclosure::from_int(3).sqrt();
    let xr_inv = x_ref.recip();
    let grp1 = xt * l * (one - tau) * (two - tau) / s432 * (two + xr_inv) * (one + xr_inv);
    let c5 = one + (Enclosure::from_int(4) - Enclosure::from_int(3) * tau) * kap / (two - tau);
    let grp2 = xt / two * (one + x_ref).recip() * ((one - tau) * (one + kap) * l + c5);
    grp1 + grp2
}

/// W(x, τ; x_ref): the explicit cap on the order-2 Euler–Maclaurin
/// recombination error of the divisor convolution.
pub fn w_term(x: Enclosure, tau: Enclosure, x_ref: Enclosure) -> Enclosure {
    assert!(tau.lo > 0.0 && tau.hi < 0.5, "w_term needs tau in (0, 1/2)");
    assert!(x_ref.lo >= 4.0, "w_term needs x_ref >= 4");
    assert!(x.hi >= x_ref.lo, "w_term needs x >= x_ref");
    w_raw(x, tau, x_ref)
}

// ------------------------------------------------------------ K₁, K₂, ζ′

fn k_memo() -> &'static Mutex<HashMap<(u64, u64, u64, u64), (Enclosure, Enclosure)>> {
    static MEMO: OnceLock<Mutex<HashMap<(u64, u64, u64, u64), (Enclosure, Enclosure)>>> =
        OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn budget_memo() -> &'static Mutex<HashMap<(u64, u64, u64), Enclosure>> {
    static MEMO: OnceLock<Mutex<HashMap<(u64, u64, u64), Enclosure>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The coefficients K₁ = −ζ(1−τ) and K₂ = −ζ′(1−τ) that multiply the two
/// weighted character sums after the main-term substitution, evaluated via
/// the Euler–Maclaurin constants: K₁ = 1/τ − C₁(1−τ), K₂ = 1/τ² + C₂(1−τ).
pub fn k_coefficients(tau: Enclosure) -> (Enclosure, Enclosure) {
    k_coefficients_with(tau, PrecisionLevel::Standard, 1.0)
}

pub fn k_coefficients_with(
    tau: Enclosure,
    precision: PrecisionLevel,
    c1_scale: f64,
) -> (Enclosure, Enclosure) {
    assert!(tau.lo > 0.0 && tau.hi < 0.5, "k_coefficients needs tau in (0, 1/2)");
    let key = (
        tau.lo.to_bits(),
        tau.hi.to_bits(),
        precision.em_cutoff(),
        c1_scale.to_bits(),
    );
    if let Some(hit) = k_memo().lock().unwrap().get(&key) {
        return *hit;
    }
    let alpha = Enclosure::one() - tau;
    let cutoff = precision.em_cutoff();
    let c1 = c1_constant_n(alpha, cutoff) * Enclosure::point(c1_scale);
    let c2 = c2_constant_n(alpha, cutoff);
    let k1 = tau.recip() - c1;
    let k2 = tau.recip() * tau.recip() + c2;
    assert!(
        k1.lo > 0.0 && k2.lo > 0.0,
        "K coefficients must be positive: tau [{}, {}] k1 [{}, {}] k2 [{}, {}] c1 [{}, {}]",
        tau.lo,
        tau.hi,
        k1.lo,
        k1.hi,
        k2.lo,
        k2.hi,
        c1.lo,
        c1.hi
    );
    k_memo().lock().unwrap().insert(key, (k1, k2));
    (k1, k2)
}

/// The lower-bound budget −2ζ′(2−2τ) > 0 that F must defeat.
pub fn budget_term(tau: Enclosure, precision: PrecisionLevel) -> Enclosure {
    assert!(tau.hi < 0.475, "budget needs 2-2tau > 1.05");
    let key = (tau.lo.to_bits(), tau.hi.to_bits(), precision.zeta_cutoff());
    if let Some(hit) = budget_memo().lock().unwrap().get(&key) {
        return *hit;
    }
    let s = Enclosure::from_int(2) - Enclosure::from_int(2) * tau;
    let v = -Enclosure::from_int(2) * zeta_deriv(1, s, Some(precision.zeta_cutoff()));
    budget_memo().lock().unwrap().insert(key, v);
    v
}

// ------------------------------------------------------------ error term

/// φ: the peak of the second branch of the combined tail weight
/// (K₁ log t − K₂)t^{τ−1}, attained at log t = K₂/K₁ + 1/(1−τ). The τ-cell
/// is internally refined because K₂/K₁ decorrelates badly under plain
/// interval division on wide cells.
fn phi_peak(tau: Enclosure, precision: PrecisionLevel, c1_scale: f64) -> Enclosure {
    const SUBS: usize = 4;
    let one = Enclosure::one();
    let mut out: Option<Enclosure> = None;
    let ratio = (tau.hi / tau.lo).powf(1.0 / SUBS as f64);
    let mut lo = tau.lo;
    for i in 0..SUBS {
        let hi = if i + 1 == SUBS { tau.hi } else { (lo * ratio).min(tau.hi) };
        let sub = Enclosure::new(lo, hi.max(lo));
        let (k1, k2) = k_coefficients_with(sub, precision, c1_scale);
        let lt2 = k2 / k1 + (one - sub).recip();
        let phi = k1 / (one - sub) * ((sub - one) * lt2).exp();
        out = Some(match out {
            None => phi,
            Some(acc) => acc.hull(phi),
        });
        lo = hi;
        if lo >= tau.hi {
            break;
        }
    }
    out.expect("at least one subcell")
}

/// E(q, τ, x): rigorous cap on everything discarded when the three
/// truncated character sums are replaced by their L-value main terms —
/// the three >x truncation tails, the two explicit remainder sums, and
/// the W recombination cap (taken at x_ref = max(4, √x)).
pub fn error_e(
    q_cell: Enclosure,
    tau_cell: Enclosure,
    x: Enclosure,
    parity: Parity,
    a: Enclosure,
    pv_flag: bool,
) -> Enclosure {
    error_e_with(
        q_cell,
        tau_cell,
        x,
        parity,
        a,
        pv_flag,
        &ErrorModel::identity(),
        PrecisionLevel::Standard,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn error_e_with(
    q_cell: Enclosure,
    tau_cell: Enclosure,
    x: Enclosure,
    parity: Parity,
    a: Enclosure,
    pv_flag: bool,
    model: &ErrorModel,
    precision: PrecisionLevel,
) -> Enclosure {
    assert!(x.lo > 1.0 && q_cell.lo > 1.0);
    let one = Enclosure::one();
    let two = Enclosure::from_int(2);
    let tau = tau_cell;
    // Pomerance halving shrinks the complete-sum cap for even characters;
    // window sums pay the factor two on top either way.
    let a_eff = if pv_flag && parity == Parity::Even {
        a / two
    } else {
        a
    };
    let p = a_eff * q_cell.sqrt() * q_cell.ln();
    let (k1, k2) = k_coefficients_with(tau, precision, model.c1_scale);
    let lx = x.ln();
    let xtm1 = ((tau - one) * lx).exp();
    // first branch of the combined (K₂ − K₁ log t)t^{τ−1} tail weight
    let psi = ((k2 - k1 * lx) * xtm1).max0();
    let phi = phi_peak(tau, precision, model.c1_scale);
    let d12 = (two * p * psi + Enclosure::from_int(4) * p * phi)
        * Enclosure::point(model.tail_scale);
    // 1/d tail weighted by the T₃ coefficient (x^τ/τ)(1/τ − log x)
    let t3 = (two * p / tau * (tau.recip() - lx) * xtm1).max0();
    // the two explicit remainder sums, via PV plus one partial summation
    let rh = xtm1 * lx * p * ((one - tau) / Enclosure::from_int(6) + Enclosure::from_ratio(1, 2));
    let x_ref = x.sqrt().max(Enclosure::point(4.0));
    let w = w_raw(x, tau, x_ref) * Enclosure::point(model.w_scale);
    w + d12 + t3 + rh
}

// -------------------------------------------------------------- F values

/// The L(1,χ) constant for one q-cell: 79.2 inside [4·10⁵, 10⁷], 12 beyond.
fn l1_cell(q_cell: Enclosure) -> Enclosure {
    assert!(q_cell.lo >= 4e5, "l1 constant needs q >= 4e5");
    if q_cell.hi <= 1e7 {
        Enclosure::parse("79.2").expect("literal")
    } else {
        Enclosure::from_int(12)
    }
}

/// F over one cell with one witness x. None when the τ⁻¹ ≥ log x side
/// condition cannot be verified on the cell (the witness is inadmissible).
fn f_value_x(
    q_cell: Enclosure,
    tau_cell: Enclosure,
    x: Enclosure,
    b: Enclosure,
    a: Enclosure,
    cfg: &CandidateConfig,
) -> Option<Enclosure> {
    let lx = x.ln();
    let gap = tau_cell.recip() - lx;
    if gap.lo < 0.0 {
        return None;
    }
    let e = error_e_with(
        q_cell,
        tau_cell,
        x,
        cfg.range.parity,
        a,
        cfg.pomerance,
        &cfg.model,
        cfg.precision,
    );
    let xt = (tau_cell * lx).exp();
    let bt = gap * b * Enclosure::point(cfg.model.b_scale) * xt / (tau_cell * q_cell.sqrt());
    let alpha = Enclosure::from_int(2) * tau_cell - Enclosure::one();
    let tail = if cfg.simplified_tail {
        tail_f_simplified(alpha, x)
    } else {
        tail_f(alpha, x)
    };
    Some(e - bt - budget_term(tau_cell, cfg.precision) + tail)
}

/// F(q, τ, x) over a cell at the configuration's own witness x, or None
/// when the τ⁻¹ ≥ log x side condition cannot be verified on the cell.
pub fn f_value_checked(
    q_cell: Enclosure,
    tau_cell: Enclosure,
    config: &CandidateConfig,
) -> Option<Enclosure> {
    let qr = config.range.q_enclosure();
    assert!(
        q_cell.lo >= qr.lo && q_cell.hi <= qr.hi,
        "q-cell outside configured range"
    );
    let a = pv_a(config);
    let b = l1_cell(q_cell);
    f_value_x(q_cell, tau_cell, config.x_value(), b, a, config)
}

/// F(q, τ, x) over a cell at the configuration's own witness x.
pub fn f_value(q_cell: Enclosure, tau_cell: Enclosure, config: &CandidateConfig) -> Enclosure {
    f_value_checked(q_cell, tau_cell, config).expect("side condition violated over the cell")
}

/// F at an arbitrary witness x over a cell inside the configured range.
/// Exposed for wall probes and the browser demo; None when x fails the
/// side condition on the cell.
pub fn f_value_at(
    q_cell: Enclosure,
    tau_cell: Enclosure,
    x: Enclosure,
    config: &CandidateConfig,
) -> Option<Enclosure> {
    let a = pv_a(config);
    let b = l1_cell(q_cell);
    f_value_x(q_cell, tau_cell, x, b, a, config)
}

fn pv_a(config: &CandidateConfig) -> Enclosure {
    let f = if config.pomerance {
        pv_constant_pomerance
    } else {
        pv_constant
    };
    f(config.range.parity, config.range.q_lo).expect("range constructor enforces the floor")
}

// ------------------------------------------------------------- certify

struct CellTracker {
    cells: u64,
    f_star: Option<Enclosure>,
    worst: (Enclosure, Enclosure),
}

enum CellOutcome {
    Certified,
    Failed(Enclosure, (Enclosure, Enclosure)),
    Inconclusive(Enclosure, (Enclosure, Enclosure)),
}

/// x-candidates for one τ-cell: the configured witness when admissible,
/// then rungs sized to crush the truncation tails, log x = log(4P) +
/// 2 log(1/τ) + margin, capped by the side condition and a hard ceiling.
struct Ladder {
    ln_x_cfg: f64,
    l4p: f64,
}

const LN_CAP: f64 = 300.0;

impl Ladder {
    fn new(cfg: &CandidateConfig, a: Enclosure, q_cell: Enclosure) -> Self {
        let p = (a * q_cell.sqrt() * q_cell.ln()).hi;
        Ladder {
            ln_x_cfg: cfg.ln_x().hi,
            l4p: (4.0 * p).ln(),
        }
    }

    fn candidates(&self, tau: Enclosure) -> Vec<Enclosure> {
        let mut lams: Vec<f64> = Vec::with_capacity(4);
        let mut out = Vec::with_capacity(4);
        if self.ln_x_cfg <= 0.9999 / tau.hi {
            out.push(Enclosure::point(self.ln_x_cfg).exp());
            lams.push(self.ln_x_cfg);
        }
        for margin in [20.0, 45.0, 8.0] {
            let lam = (self.l4p + 2.0 * (1.0 / tau.lo).ln() + margin)
                .min(0.95 / tau.hi)
                .min(LN_CAP);
            let dup = lams.iter().any(|&l| (lam - l).abs() <= l.abs() * 1e-4);
            if !dup || out.is_empty() {
                out.push(Enclosure::point(lam).exp());
                lams.push(lam);
            }
        }
        out
    }
}

fn geo_mid(e: Enclosure) -> f64 {
    (0.5 * (e.lo.ln() + e.hi.ln())).exp().clamp(e.lo, e.hi)
}

#[allow(clippy::too_many_arguments)]
fn solve_cell(
    q: Enclosure,
    tau: Enclosure,
    depth: u32,
    cfg: &CandidateConfig,
    a: Enclosure,
    b: Enclosure,
    ladder: &Ladder,
    tracker: &mut CellTracker,
) -> CellOutcome {
    tracker.cells += 1;
    let candidates = ladder.candidates(tau);
    let mut best: Option<Enclosure> = None;
    let mut best_x: Option<Enclosure> = None;
    for &x in &candidates {
        if let Some(f) = f_value_x(q, tau, x, b, a, cfg) {
            if f.hi < 0.0 {
                // certified leaf: track the weakest certified margin
                let replace = match tracker.f_star {
                    None => true,
                    Some(star) => f.hi > star.hi,
                };
                if replace {
                    tracker.f_star = Some(f);
                    tracker.worst = (q, tau);
                }
                return CellOutcome::Certified;
            }
            if best.map_or(true, |m| f.hi < m.hi) {
                best = Some(f);
                best_x = Some(x);
            }
        }
    }
    if depth >= cfg.max_depth {
        // depth exhausted: probe one corner point to separate a definite
        // counterexample from interval slack
        let qp = Enclosure::point(q.lo);
        let tp = Enclosure::point(tau.hi);
        let mut any_unresolved = false;
        let mut probe: Option<Enclosure> = None;
        for &x in &candidates {
            match f_value_x(qp, tp, x, b, a, cfg) {
                Some(f) if f.lo > 0.0 => {
                    if probe.map_or(true, |m| f.lo < m.lo) {
                        probe = Some(f);
                    }
                }
                Some(_) => any_unresolved = true,
                None => {}
            }
        }
        // the capped ladder rung always satisfies the side condition, so at
        // least one candidate produced an enclosure
        let fallback = best
            .or(probe)
            .expect("ladder always yields an admissible candidate");
        return if any_unresolved || probe.is_none() {
            CellOutcome::Inconclusive(fallback, (q, tau))
        } else {
            CellOutcome::Failed(probe.unwrap_or(fallback), (q, tau))
        };
    }
    // choose the dimension whose collapse narrows F the most
    let split_tau = match (best_x, best) {
        (Some(x), Some(full)) => {
            let fq = f_value_x(Enclosure::point(geo_mid(q)), tau, x, b, a, cfg);
            let ft = f_value_x(q, Enclosure::point(geo_mid(tau)), x, b, a, cfg);
            match (fq, ft) {
                (Some(fq), Some(ft)) => {
                    let q_contrib = full.width() - fq.width();
                    let t_contrib = full.width() - ft.width();
                    t_contrib >= q_contrib
                }
                _ => true,
            }
        }
        _ => true,
    };
    let children = if split_tau {
        let m = geo_mid(tau);
        [
            (q, Enclosure::new(tau.lo, m)),
            (q, Enclosure::new(m, tau.hi)),
        ]
    } else {
        let m = geo_mid(q);
        [
            (Enclosure::new(q.lo, m), tau),
            (Enclosure::new(m, q.hi), tau),
        ]
    };
    for (qc, tc) in children {
        match solve_cell(qc, tc, depth + 1, cfg, a, b, ladder, tracker) {
            CellOutcome::Certified => {}
            other => return other,
        }
    }
    CellOutcome::Certified
}

/// Split a range at the 10⁷ boundary where the L(1,χ) constant changes.
fn segments(range: &ModulusRange) -> Vec<(u128, u128)> {
    if range.q_lo < 10_000_000 && 10_000_000 < range.q_hi {
        vec![(range.q_lo, 10_000_000), (10_000_000, range.q_hi)]
    } else {
        vec![(range.q_lo, range.q_hi)]
    }
}

/// Certify F < 0 for τ ∈ (0, τ_floor] at one fixed witness per segment:
/// every positive term admits a τ-uniform cap while the B-term bracket
/// grows like 1/τ², so a single sign check of the bracket closes the strip.
fn dominance_floor(cfg: &CandidateConfig, a: Enclosure) -> bool {
    let one = Enclosure::one();
    let two = Enclosure::from_int(2);
    let tf = cfg.tau_floor();
    let tfe = Enclosure::point(tf);
    let tau = Enclosure::new(0.0, tf);
    // the K-caps used below need C₁ > 0 and C₂ < 0 on α ∈ [1 − τ_f, 1);
    // crude sup-norm caps on the constant integrals prove both signs
    let alpha = one - tau; // [1-τf, 1]
    let s = alpha + Enclosure::from_int(3);
    let i0_cap = (b3_sup() / (s - one)).hi;
    let i1_cap = (b3_sup() / ((s - one) * (s - one))).hi;
    let prod = alpha * (alpha + one) * (alpha + two);
    let c1_lo = (Enclosure::from_ratio(1, 2) + alpha / Enclosure::from_int(12)
        - prod / Enclosure::from_int(6) * Enclosure::point(i0_cap))
    .lo;
    let w0 = (alpha + two) * (two * alpha + one) + alpha * (alpha + one);
    let c2_hi = (-Enclosure::from_ratio(1, 12)
        + (w0 * Enclosure::point(i0_cap) + prod * Enclosure::point(i1_cap))
            / Enclosure::from_int(6))
    .hi;
    if !(c1_lo > 0.0 && c2_hi < 0.0) {
        return false;
    }
    for (s_lo, s_hi) in segments(&cfg.range) {
        let q_cell = Enclosure::from_u128(s_lo).hull(Enclosure::from_u128(s_hi));
        let p = a * q_cell.sqrt() * q_cell.ln();
        let b = l1_cell(q_cell) * Enclosure::point(cfg.model.b_scale);
        let lam_f = ((4.0 * p.hi).ln() + 2.0 * (1.0 / tf).ln() + 20.0)
            .min(LN_CAP)
            .min(0.95 / tf);
        let lam = Enclosure::point(lam_f);
        let x = lam.exp();
        if !(tf * lam_f < 0.9999) {
            return false;
        }
        // τ-free part: W over τ ∈ [0, τf] plus remainder caps and the
        // eagle tail, against the budget floor
        let x_ref = x.sqrt().max(Enclosure::point(4.0));
        let w = w_raw(x, tau, x_ref) * Enclosure::point(cfg.model.w_scale);
        let rh = ((tau - one) * lam).exp() * lam * p * ((one - tau) / Enclosure::from_int(6)
            + Enclosure::from_ratio(1, 2));
        let alpha_tail = Enclosure::new(-1.0, 2.0 * tf - 1.0);
        let ft = tail_f(alpha_tail, x);
        let bud = budget_term(tau, cfg.precision);
        let free = (w + rh + ft).hi - bud.lo;
        if !(free < 0.0) {
            return false;
        }
        // τ⁻²-weighted bracket: δ₁₂ + T̂₃ ≤ 8P·x^{τf−1}/τ² while the
        // B-term is at least B(1 − τf·log x)/(τ²√q)
        let tails_cap = Enclosure::from_int(8)
            * p
            * ((tfe - one) * lam).exp()
            * Enclosure::point(cfg.model.tail_scale.max(1.0));
        let bt_floor = b * (one - tfe * lam) / q_cell.sqrt();
        let bracket = tails_cap - bt_floor;
        if !(bracket.hi <= 0.0) {
            return false;
        }
    }
    true
}

/// Prove F(q, τ, x) < 0 for every q in the range and every
/// τ ∈ (0, c/log q], by adaptive subdivision above the τ-floor and the
/// dominance argument below it.
pub fn certify(config: &CandidateConfig) -> VerificationCertificate {
    config.validate().expect("invalid candidate configuration");
    let a = pv_a(config);
    let tf = config.tau_floor();
    let mut tracker = CellTracker {
        cells: 0,
        f_star: None,
        worst: (config.range.q_enclosure(), Enclosure::point(tf)),
    };
    let finish = |status: Status, tracker: &CellTracker, f: Option<Enclosure>,
                  cell: Option<(Enclosure, Enclosure)>| {
        VerificationCertificate {
            config: *config,
            status,
            worst_cell: cell.unwrap_or(tracker.worst),
            f_star: f
                .or(tracker.f_star)
                .unwrap_or_else(|| Enclosure::new(-f64::MAX, f64::MAX)),
            cells_examined: tracker.cells,
            reduced_from: None,
        }
    };
    if !dominance_floor(config, a) {
        let sub = (
            config.range.q_enclosure(),
            Enclosure::new(0.0, tf),
        );
        return finish(Status::Inconclusive, &tracker, None, Some(sub));
    }
    let c = config.c_value();
    for (s_lo, s_hi) in segments(&config.range) {
        let seg = Enclosure::from_u128(s_lo).hull(Enclosure::from_u128(s_hi));
        let b = l1_cell(seg);
        let nq = 6;
        let lq_lo = seg.lo.ln();
        let lq_hi = seg.hi.ln();
        let mut q_cuts = Vec::with_capacity(nq + 1);
        for i in 0..=nq {
            let f = i as f64 / nq as f64;
            q_cuts.push(if i == 0 {
                seg.lo
            } else if i == nq {
                seg.hi
            } else {
                (lq_lo + f * (lq_hi - lq_lo)).exp()
            });
        }
        for w in q_cuts.windows(2) {
            let q_cell = Enclosure::new(w[0], w[1].max(w[0]));
            let ladder = Ladder::new(config, a, q_cell);
            let tau_top = (c / Enclosure::point(q_cell.lo).ln()).hi;
            if tau_top <= tf {
                continue;
            }
            let ntau = 24;
            let lr = (tau_top / tf).ln() / ntau as f64;
            let mut t_cuts = Vec::with_capacity(ntau + 1);
            for k in 0..=ntau {
                t_cuts.push(if k == 0 {
                    tf
                } else if k == ntau {
                    tau_top
                } else {
                    tf * (lr * k as f64).exp()
                });
            }
            for tw in t_cuts.windows(2) {
                let tau_cell = Enclosure::new(tw[0], tw[1].max(tw[0]));
                match solve_cell(q_cell, tau_cell, 0, config, a, b, &ladder, &mut tracker) {
                    CellOutcome::Certified => {}
                    CellOutcome::Failed(f, cell) => {
                        return finish(Status::Failed, &tracker, Some(f), Some(cell));
                    }
                    CellOutcome::Inconclusive(f, cell) => {
                        return finish(Status::Inconclusive, &tracker, Some(f), Some(cell));
                    }
                }
            }
        }
    }
    finish(Status::Certified, &tracker, None, None)
}
