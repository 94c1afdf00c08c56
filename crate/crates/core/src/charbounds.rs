//! Character-sum machinery: Pólya–Vinogradov constants split by parity,
//! hybrid trivial/PV tail bounds for weighted character sums, and the
//! L(1,χ) lower-bound constants.

use crate::rigor::Enclosure;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundError {
    /// A modulus fell below the floor required by the bound in use.
    QBelowFloor { q: u128, floor: u128 },
    /// q_lo > q_hi.
    EmptyRange,
    /// The weight function is not decreasing at the truncation point.
    NotDecreasing,
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::QBelowFloor { q, floor } => {
                write!(f, "modulus {q} below required floor {floor}")
            }
            BoundError::EmptyRange => write!(f, "empty modulus range"),
            BoundError::NotDecreasing => {
                write!(f, "weight function not decreasing at truncation point")
            }
        }
    }
}

impl std::error::Error for BoundError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn index(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// The archimedean constant: 2/π² for even characters, 1/(2π) for odd.
    pub fn e_constant(self) -> Enclosure {
        let pi = Enclosure::pi();
        match self {
            Parity::Even => Enclosure::from_int(2) / (pi * pi),
            Parity::Odd => Enclosure::one() / (Enclosure::from_int(2) * pi),
        }
    }

    /// Unconditional verification floor for this parity: zero-free up to
    /// 4·10⁵ (even) and 3·10⁸ (odd).
    pub fn q_floor(self) -> u128 {
        match self {
            Parity::Even => 400_000,
            Parity::Odd => 300_000_000,
        }
    }
}

/// A contiguous range of moduli sharing one parity of character.
#[derive(Clone, Copy, Debug)]
pub struct ModulusRange {
    pub q_lo: u128,
    pub q_hi: u128,
    pub parity: Parity,
}

impl ModulusRange {
    /// Standard constructor: enforces q_lo ≥ 1200 and the parity floor.
    pub fn new(q_lo: u128, q_hi: u128, parity: Parity) -> Result<Self, BoundError> {
        if q_lo > q_hi {
            return Err(BoundError::EmptyRange);
        }
        if q_lo < 1200 {
            return Err(BoundError::QBelowFloor { q: q_lo, floor: 1200 });
        }
        let floor = parity.q_floor();
        if q_lo < floor {
            return Err(BoundError::QBelowFloor { q: q_lo, floor });
        }
        Ok(ModulusRange { q_lo, q_hi, parity })
    }

    /// Override constructor for ranges that start below the parity floor
    /// (verified tables and oracle paths); still requires q_lo ≥ 1.
    pub fn with_override(q_lo: u128, q_hi: u128, parity: Parity) -> Result<Self, BoundError> {
        if q_lo > q_hi {
            return Err(BoundError::EmptyRange);
        }
        if q_lo == 0 {
            return Err(BoundError::QBelowFloor { q: 0, floor: 1 });
        }
        Ok(ModulusRange { q_lo, q_hi, parity })
    }

    /// The range as one interval.
    pub fn q_enclosure(&self) -> Enclosure {
        Enclosure::from_u128(self.q_lo).hull(Enclosure::from_u128(self.q_hi))
    }
}

/// The Pólya–Vinogradov constant A_i(q0) valid for all q ≥ q0 ≥ 1200:
/// even gives 1/π² + 1/(2 log q0), odd gives 1/(2π) + 1/log q0.
pub fn pv_constant(parity: Parity, q0: u128) -> Result<Enclosure, BoundError> {
    if q0 < 1200 {
        return Err(BoundError::QBelowFloor { q: q0, floor: 1200 });
    }
    let lq = Enclosure::from_u128(q0).ln();
    let pi = Enclosure::pi();
    Ok(match parity {
        Parity::Even => {
            Enclosure::one() / (pi * pi) + Enclosure::one() / (Enclosure::from_int(2) * lq)
        }
        Parity::Odd => Enclosure::one() / (Enclosure::from_int(2) * pi) + Enclosure::one() / lq,
    })
}

/// Variant with the Pomerance refinement: character sums starting at zero
/// admit half the constant when the character is even.
pub fn pv_constant_pomerance(parity: Parity, q0: u128) -> Result<Enclosure, BoundError> {
    let a = pv_constant(parity, q0)?;
    Ok(match parity {
        Parity::Even => a / Enclosure::from_int(2),
        Parity::Odd => a,
    })
}

/// Weight functions admitted by the tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HKind {
    /// h(t) = (log t)·t^{τ−1}
    LogOverPower,
    /// h(t) = t^{τ−1}
    InversePower,
    /// h(t) = 1/t
    Inverse,
}

fn h_eval(kind: HKind, tau: Enclosure, t: Enclosure) -> Enclosure {
    let lnt = t.ln();
    match kind {
        HKind::LogOverPower => ((tau - Enclosure::one()) * lnt).exp() * lnt,
        HKind::InversePower => ((tau - Enclosure::one()) * lnt).exp(),
        HKind::Inverse => Enclosure::one() / t,
    }
}

/// Closed-form antiderivative of h.
fn h_antideriv(kind: HKind, tau: Enclosure, t: Enclosure) -> Enclosure {
    let lnt = t.ln();
    match kind {
        HKind::LogOverPower => {
            // ∫ (log t) t^{τ−1} dt = t^τ (τ log t − 1)/τ²
            let tp = (tau * lnt).exp();
            tp * (tau * lnt - Enclosure::one()) / (tau * tau)
        }
        HKind::InversePower => (tau * lnt).exp() / tau,
        HKind::Inverse => lnt,
    }
}

/// Upper bound for |Σ_{n>z} χ(n) h(n)|, uniform over the range and over
/// primitive characters of its parity.
///
/// Abel summation against the window bound |Σ_{z<n≤t} χ(n)| ≤ min(2t, 2S)
/// with S = A√q·log q gives:
///   z below the split: 2z·h(z) + 2∫_z^S h(t) dt,
///   z at or beyond it: 2S·h(z),
/// which agree at z = S. The first form is the sharper one and is used
/// only when the whole z-interval sits below the whole S-interval.
pub fn tail_bound(
    kind: HKind,
    tau: Enclosure,
    z: Enclosure,
    range: &ModulusRange,
    a: Enclosure,
) -> Result<Enclosure, BoundError> {
    assert!(z.lo > 1.0, "tail_bound needs z > 1");
    if matches!(kind, HKind::LogOverPower | HKind::InversePower) {
        assert!(
            tau.lo > 0.0 && tau.hi < 1.0,
            "power weights need tau in (0,1)"
        );
    }
    // h must be decreasing at and beyond z
    if matches!(kind, HKind::LogOverPower) {
        let crit = ((Enclosure::one() - tau) * z.ln()).lo;
        if crit < 1.0 {
            return Err(BoundError::NotDecreasing);
        }
    }
    let q = range.q_enclosure();
    let split = a * q.sqrt() * q.ln();
    let two = Enclosure::from_int(2);
    let hz = h_eval(kind, tau, z);
    if z.hi <= split.lo {
        let integral = (h_antideriv(kind, tau, split) - h_antideriv(kind, tau, z)).max0();
        Ok(two * z * hz + two * integral)
    } else {
        Ok(two * split * hz)
    }
}

/// The L(1,χ) lower-bound constant B with L(1,χ) ≥ B·q^{−1/2}: 79.2 on
/// [4·10⁵, 10⁷], 12 beyond; a range touching both sides takes 12.
pub fn l1_lower(range: &ModulusRange) -> Result<Enclosure, BoundError> {
    if range.q_lo < 400_000 {
        return Err(BoundError::QBelowFloor {
            q: range.q_lo,
            floor: 400_000,
        });
    }
    if range.q_hi <= 10_000_000 {
        Ok(Enclosure::parse("79.2").expect("literal"))
    } else {
        Ok(Enclosure::from_int(12))
    }
}
