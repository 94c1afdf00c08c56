//! The large-moduli regime: closed-form inequalities that certify the
//! theorem for every q beyond the tabulated ranges, and the threshold
//! solver that locates where they take over.
//!
//! Two conditions drive the contradiction argument out there. First the
//! Pintz inequality 6ec/log q < (log 4)/4, which also forces τ < 1/8.
//! Second, positivity of
//!
//!   (1/c − 1/2)·log q − log A − 9·log log q + 8·log c,
//!
//! a lower bound for 1/τ − log x at the witness x = A√q(log q)/τ⁸. Both
//! sides are monotone in log q past a small turnover, so certified
//! bisection on log q pins each takeover point.

use crate::charbounds::{pv_constant, Parity};
use crate::criterion::{budget_term, PrecisionLevel};
use crate::rigor::Enclosure;
use crate::search::TableRow;
use crate::specfun::tail_f;
use std::fmt;

/// Default q₀ feeding A(q₀): the start of the asymptotic regime. The
/// published tail end, 9.1·10³², is the self-consistent alternative when
/// the inequality is only claimed beyond the table.
pub const DEFAULT_Q0_FOR_A: u128 = 460_000_000_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AsymptoticError {
    Domain(String),
    /// Bisection found no certified sign change below the search cap 10⁴⁰.
    NoSignChange,
}

impl fmt::Display for AsymptoticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticError::Domain(msg) => write!(f, "domain error: {msg}"),
            AsymptoticError::NoSignChange => {
                write!(f, "no certified sign change below q = 1e40")
            }
        }
    }
}

impl std::error::Error for AsymptoticError {}

fn c_enclosure(c_milli: u32) -> Enclosure {
    Enclosure::from_ratio(c_milli as i64, 1000)
}

/// 6ec/log q < (log 4)/4, certified over all of q. Forces τ ≤ c/log q
/// below (log 4)/(24e) < 1/8, the guard the margin bound needs.
pub fn pintz_inequality_holds(c_milli: u32, q: Enclosure) -> bool {
    assert!(c_milli > 0 && q.lo > 1.0);
    let lhs = Enclosure::from_int(6) * Enclosure::one().exp() * c_enclosure(c_milli) / q.ln();
    let rhs = Enclosure::from_int(4).ln() / Enclosure::from_int(4);
    lhs.hi < rhs.lo
}

/// Refinement the closing argument suggests: replace Pintz's (log 4)/4
/// by the partial-summation lower bound −2ζ′(2−2τ) − f(2τ−1, x), which
/// only sharpens it. The τ < 1/8 guard no longer comes for free, so it
/// is required explicitly; x is the regime witness A√q(log q)/τ⁸ at its
/// smallest over the box.
pub fn pintz_inequality_holds_refined(
    c_milli: u32,
    q: Enclosure,
    parity: Parity,
    q0_for_a: u128,
) -> Result<bool, AsymptoticError> {
    assert!(c_milli > 0 && q.lo > 1.0);
    let c = c_enclosure(c_milli);
    let lq = q.ln();
    let tau_top = Enclosure::new(0.0, (c / lq).hi);
    if tau_top.hi >= 0.125 {
        return Ok(false);
    }
    let a = pv_constant(parity, q0_for_a)
        .map_err(|e| AsymptoticError::Domain(e.to_string()))?;
    let x_min = Enclosure::point(
        (a * q.sqrt() * lq / Enclosure::point(tau_top.hi).powi(8)).lo,
    );
    if x_min.lo < 16.0 {
        return Ok(false);
    }
    let s = Enclosure::new(-1.0, 2.0 * tau_top.hi - 1.0);
    let rhs = budget_term(tau_top, PrecisionLevel::Standard).lo - tail_f(s, x_min).hi;
    let lhs = Enclosure::from_int(6) * Enclosure::one().exp() * c / lq;
    Ok(lhs.hi < rhs)
}

fn margin_raw(c: Enclosure, log_q: Enclosure, a: Enclosure) -> Enclosure {
    let half = Enclosure::from_ratio(1, 2);
    (c.recip() - half) * log_q - a.ln() - Enclosure::from_int(9) * log_q.ln()
        + Enclosure::from_int(8) * c.ln()
}

/// Enclosure of (1/c − 1/2)·log q − log A − 9·log log q + 8·log c with
/// A = A(q₀) for the parity. Positivity certifies 1/τ − log x > 0 at the
/// regime witness. Requires the Pintz inequality over all of q (which
/// supplies the τ < 1/8 monotonicity guard) and q₀ ≥ 1200.
pub fn side_condition_margin(
    c_milli: u32,
    q: Enclosure,
    parity: Parity,
    q0_for_a: u128,
) -> Result<Enclosure, AsymptoticError> {
    if !pintz_inequality_holds(c_milli, q) {
        return Err(AsymptoticError::Domain(
            "the Pintz inequality must hold over all of q".into(),
        ));
    }
    let a = pv_constant(parity, q0_for_a)
        .map_err(|e| AsymptoticError::Domain(e.to_string()))?;
    Ok(margin_raw(c_enclosure(c_milli), q.ln(), a))
}

/// Certified q-thresholds for one parity: past `combined_threshold` both
/// large-moduli inequalities hold.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdReport {
    pub c_milli: u32,
    pub parity: Parity,
    pub q0_for_a: u128,
    pub pintz_threshold: Enclosure,
    pub side_condition_threshold: Enclosure,
    pub combined_threshold: Enclosure,
}

impl ThresholdReport {
    pub fn to_json(&self) -> serde_json::Value {
        let enc = |e: Enclosure| serde_json::json!([e.lo, e.hi]);
        serde_json::json!({
            "c": format!("{}.{:03}", self.c_milli / 1000, self.c_milli % 1000),
            "parity": match self.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            },
            "q0_for_a": self.q0_for_a.to_string(),
            "pintz_threshold": enc(self.pintz_threshold),
            "side_condition_threshold": enc(self.side_condition_threshold),
            "combined_threshold": enc(self.combined_threshold),
        })
    }
}

/// Search cap: ln(10⁴⁰).
fn log_q_cap() -> f64 {
    (Enclosure::from_int(10).ln() * Enclosure::from_int(40)).lo
}

/// Bisection on log q for a function certified increasing on the bracket.
/// Returns (lo, hi) with g < 0 at lo (unless already positive there) and
/// g > 0 at hi; stops once enclosure sign tests cannot separate.
fn bisect_increasing(
    mut lo: f64,
    mut hi: f64,
    g: impl Fn(f64) -> Enclosure,
) -> Result<(f64, f64), AsymptoticError> {
    let first = g(lo);
    if first.strictly_positive() {
        return Ok((lo, lo));
    }
    if !first.strictly_negative() {
        return Err(AsymptoticError::Domain(
            "cannot certify the sign at the bracket start".into(),
        ));
    }
    if !g(hi).strictly_positive() {
        return Err(AsymptoticError::NoSignChange);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = g(mid);
        if s.strictly_negative() {
            lo = mid;
        } else if s.strictly_positive() {
            hi = mid;
        } else {
            break;
        }
    }
    Ok((lo, hi))
}

fn exp_bracket(lo: f64, hi: f64) -> Enclosure {
    Enclosure::new(
        Enclosure::point(lo).exp().lo,
        Enclosure::point(hi).exp().hi,
    )
}

/// Locate both takeover points for (c, parity) by certified bisection on
/// log q, up to q = 10⁴⁰.
pub fn solve_threshold(
    c_milli: u32,
    parity: Parity,
    q0_for_a: u128,
) -> Result<ThresholdReport, AsymptoticError> {
    if c_milli == 0 || c_milli >= 2000 {
        return Err(AsymptoticError::Domain(
            "threshold solving needs 0 < c < 2".into(),
        ));
    }
    let c = c_enclosure(c_milli);
    let a = pv_constant(parity, q0_for_a)
        .map_err(|e| AsymptoticError::Domain(e.to_string()))?;
    let cap = log_q_cap();

    // log q ↦ (log 4)/4 − 6ec/log q is increasing
    let six_ec = Enclosure::from_int(6) * Enclosure::one().exp() * c;
    let rhs = Enclosure::from_int(4).ln() / Enclosure::from_int(4);
    let (plo, phi) = bisect_increasing(f64::ln(2.0), cap, |l| {
        rhs - six_ec / Enclosure::point(l)
    })?;
    let pintz_threshold = exp_bracket(plo, phi);

    // the margin's derivative in log q is (1/c − 1/2) − 9/log q; start
    // the bracket past the turnover so increase is certified and the
    // root's positivity propagates upward
    let turnover = (Enclosure::from_int(9) / (c.recip() - Enclosure::from_ratio(1, 2))).hi;
    let start = turnover.max(Enclosure::from_int(1200).ln().hi);
    let (slo, shi) = bisect_increasing(start, cap, |l| {
        margin_raw(c, Enclosure::point(l), a)
    })?;
    let side_condition_threshold = exp_bracket(slo, shi);

    Ok(ThresholdReport {
        c_milli,
        parity,
        q0_for_a,
        pintz_threshold,
        side_condition_threshold,
        combined_threshold: pintz_threshold.max(side_condition_threshold),
    })
}

/// Outcome of the end-to-end coverage check, with one line per defect
/// when the ranges do not join up.
#[derive(Clone, Debug)]
pub struct CoverageReport {
    pub covered: bool,
    pub failures: Vec<String>,
}

/// True iff the verified table plus the two threshold reports cover
/// [4·10⁵, ∞) for even characters and [3·10⁸, ∞) for odd: the rows tile
/// up to a q_end at or beyond each parity's combined threshold (and at
/// or beyond the q₀ its A-constant needs).
pub fn theorem_coverage(
    table: &[TableRow],
    report_even: &ThresholdReport,
    report_odd: &ThresholdReport,
) -> bool {
    coverage_report(table, report_even, report_odd).covered
}

pub fn coverage_report(
    table: &[TableRow],
    report_even: &ThresholdReport,
    report_odd: &ThresholdReport,
) -> CoverageReport {
    let mut failures = Vec::new();
    if table.is_empty() {
        return CoverageReport {
            covered: false,
            failures: vec!["the table is empty".into()],
        };
    }
    for (i, pair) in table.windows(2).enumerate() {
        if pair[0].q_hi != pair[1].q_lo {
            failures.push(format!("rows {} and {} do not tile", i, i + 1));
        }
    }
    if report_even.parity != Parity::Even || report_odd.parity != Parity::Odd {
        failures.push("threshold reports are for the wrong parities".into());
    }

    const EVEN_START: u128 = 400_000;
    const ODD_START: u128 = 300_000_000;
    if table[0].even.is_none() || table[0].q_lo > EVEN_START {
        failures.push(format!(
            "even coverage must begin by q = {}",
            EVEN_START
        ));
    }
    if let Some(hole) = table.iter().position(|r| r.even.is_none()) {
        failures.push(format!("row {hole} has no even entry"));
    }
    match table.iter().position(|r| r.odd.is_some()) {
        None => failures.push("no odd entries at all".into()),
        Some(first) => {
            if table[first].q_lo > ODD_START {
                failures.push(format!(
                    "odd coverage must begin by q = {}, first odd row starts at {}",
                    ODD_START, table[first].q_lo
                ));
            }
            if let Some(hole) = table[first..].iter().position(|r| r.odd.is_none()) {
                failures.push(format!("row {} has no odd entry", first + hole));
            }
        }
    }

    let q_end = table.last().unwrap().q_hi;
    let q_end_enc = Enclosure::from_u128(q_end);
    for report in [report_even, report_odd] {
        let name = match report.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        if q_end_enc.lo < report.pintz_threshold.hi {
            failures.push(format!(
                "{name}: the Pintz inequality only takes over past the table end"
            ));
        }
        if q_end_enc.lo < report.side_condition_threshold.hi {
            failures.push(format!(
                "{name}: the side-condition margin only turns positive past the table end"
            ));
        }
        if q_end < report.q0_for_a {
            failures.push(format!(
                "{name}: A(q0) is only valid from {}, beyond the table end",
                report.q0_for_a
            ));
        }
    }

    CoverageReport {
        covered: failures.is_empty(),
        failures,
    }
}
