//! Outward-rounded floating-point enclosures.
//!
//! An [`Enclosure`] is a closed interval `[lo, hi]` of `f64` endpoints that
//! is guaranteed to contain the exact real value of the expression it was
//! computed from. Every operation rounds the lower endpoint down and the
//! upper endpoint up by at least one unit in the last place, so soundness
//! never depends on the rounding mode of the FPU. Transcendental functions
//! go through the platform `exp`/`ln`, which are accurate to well under one
//! ulp on every target we build for; their results are padded by two ulps
//! on each side.
//!
//! Near-zero sign decisions are handled upstream by adaptive subdivision
//! rather than by raising the working precision: a straddling enclosure is
//! never treated as a sign, only as a reason to split the cell.

use std::fmt;

/// A closed interval guaranteed to contain an exact real value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

// Error-free transforms give exact directed rounding: the residual's sign
// says whether the rounded result sits above or below the exact one, so
// exact operations keep zero width.

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    if e >= 0.0 {
        s
    } else {
        s.next_down()
    }
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    if e <= 0.0 {
        s
    } else {
        s.next_up()
    }
}

#[inline]
fn mul_err(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    // the FMA residual is exact only away from the subnormal range
    if p != 0.0 && p.abs() < 1e-290 {
        return (p, f64::NAN); // NAN forces a pad in both directions
    }
    (p, a.mul_add(b, -p))
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    let (p, e) = mul_err(a, b);
    if e >= 0.0 {
        p
    } else {
        p.next_down()
    }
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    let (p, e) = mul_err(a, b);
    if e <= 0.0 {
        p
    } else {
        p.next_up()
    }
}

#[inline]
fn div_err(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if q != 0.0 && q.abs() < 1e-290 {
        return (q, f64::NAN);
    }
    // e = q*b - a; exact quotient is below q iff e and b share a sign
    (q, q.mul_add(b, -a))
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let (q, e) = div_err(a, b);
    if e.is_nan() {
        return q.next_down();
    }
    // q - exact = e/b, so q overshoots exactly when e and b share a sign
    if e != 0.0 && (e > 0.0) == (b > 0.0) {
        q.next_down()
    } else {
        q
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    let (q, e) = div_err(a, b);
    if e.is_nan() {
        return q.next_up();
    }
    if e != 0.0 && (e > 0.0) != (b > 0.0) {
        q.next_up()
    } else {
        q
    }
}

/// Errors from [`Enclosure::parse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Malformed,
    Overflow,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Malformed => write!(f, "malformed decimal literal"),
            ParseError::Overflow => write!(f, "decimal literal outside f64 range"),
        }
    }
}

impl std::error::Error for ParseError {}

impl Enclosure {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "inverted enclosure [{lo}, {hi}]");
        assert!(lo.is_finite() && hi.is_finite(), "non-finite enclosure");
        Enclosure { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    pub fn one() -> Self {
        Self::point(1.0)
    }

    pub fn from_int(n: i64) -> Self {
        // |n| < 2^53 converts exactly; pad otherwise.
        if n.unsigned_abs() < (1u64 << 53) {
            Self::point(n as f64)
        } else {
            let v = n as f64;
            Self::new(v.next_down(), v.next_up())
        }
    }

    pub fn from_u128(n: u128) -> Self {
        if n < (1u128 << 53) {
            Self::point(n as f64)
        } else {
            let v = n as f64;
            Self::new(v.next_down(), v.next_up())
        }
    }

    pub fn from_i128(n: i128) -> Self {
        if n.unsigned_abs() < (1u128 << 53) {
            Self::point(n as f64)
        } else {
            let v = n as f64;
            Self::new(v.next_down(), v.next_up())
        }
    }

    /// Exact rational `num / den` as an enclosure.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::from_int(num) / Self::from_int(den)
    }

    /// Parse a decimal literal (`-12.75`, `4e5`, `9.1e32`, `1.011`) into an
    /// enclosure containing the exact decimal value. Width is at most two
    /// ulps: one from the power of ten, one from the final product.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let s = text.as_bytes();
        let mut i = 0;
        let neg = match s.first() {
            Some(b'-') => {
                i += 1;
                true
            }
            Some(b'+') => {
                i += 1;
                false
            }
            _ => false,
        };
        let mut mant: i128 = 0;
        let mut digits = 0usize;
        let mut frac_digits = 0i32;
        let mut truncated = false;
        let mut seen_dot = false;
        while i < s.len() {
            match s[i] {
                b'0'..=b'9' => {
                    if mant < (i128::MAX - 9) / 10 && digits < 36 {
                        mant = mant * 10 + i128::from(s[i] - b'0');
                        if seen_dot {
                            frac_digits += 1;
                        }
                    } else if seen_dot {
                        // dropped fractional digit: mantissa is a truncation
                        truncated = true;
                    } else {
                        // dropped integer digit: shift the exponent instead
                        truncated = true;
                        frac_digits -= 1;
                    }
                    digits += 1;
                    i += 1;
                }
                b'.' if !seen_dot => {
                    seen_dot = true;
                    i += 1;
                }
                b'e' | b'E' => break,
                _ => return Err(ParseError::Malformed),
            }
        }
        if digits == 0 {
            return Err(ParseError::Malformed);
        }
        let mut exp10: i32 = 0;
        if i < s.len() {
            // exponent part
            i += 1;
            let rest = std::str::from_utf8(&s[i..]).map_err(|_| ParseError::Malformed)?;
            if rest.is_empty() {
                return Err(ParseError::Malformed);
            }
            exp10 = rest.parse::<i32>().map_err(|_| ParseError::Malformed)?;
        }
        let exp10 = exp10.checked_sub(frac_digits).ok_or(ParseError::Overflow)?;
        // value ∈ sign · [mant, mant + truncated] · 10^exp10
        let lo_mant = Self::from_i128(mant);
        let hi_mant = Self::from_i128(mant + i128::from(truncated));
        let mant_enc = lo_mant.hull(hi_mant);
        // dividing by a positive power keeps dyadic decimals exact (12.75)
        let v = if exp10 >= 0 {
            mant_enc * Self::pow10(exp10)?
        } else if exp10 >= -308 {
            mant_enc / Self::pow10(-exp10)?
        } else {
            mant_enc * Self::pow10(exp10)?
        };
        Ok(if neg { v.neg() } else { v })
    }

    /// Enclosure of 10^e for any e with a finite-f64 result.
    pub fn pow10(e: i32) -> Result<Self, ParseError> {
        if !(-340..=308).contains(&e) {
            return Err(ParseError::Overflow);
        }
        let mut acc = Self::one();
        let mut base = Self::point(10.0);
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        if !acc.hi.is_finite() {
            return Err(ParseError::Overflow);
        }
        Ok(if e < 0 { Self::one() / acc } else { acc })
    }

    /// Tight enclosure of π.
    pub fn pi() -> Self {
        // f64 nearest-to-π rounds down, so [PI, next_up(PI)] brackets it.
        Self::new(std::f64::consts::PI, std::f64::consts::PI.next_up())
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    /// Overlap test used by the cross-check identities.
    pub fn overlaps(self, other: Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// The certified sign test: the whole interval lies left of zero.
    pub fn strictly_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn strictly_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn neg(self) -> Self {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Enclosure {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    /// Clamp below at zero; encloses `max(0, v)` for every v in self.
    pub fn max0(self) -> Self {
        Enclosure {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    pub fn hull(self, other: Self) -> Self {
        Enclosure {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(self, other: Self) -> Self {
        Enclosure {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn max(self, other: Self) -> Self {
        Enclosure {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn recip(self) -> Self {
        Self::one() / self
    }

    pub fn sqrt(self) -> Self {
        assert!(self.lo >= 0.0, "sqrt of negative enclosure");
        // y^2 - x decides the direction; f64 sqrt is correctly rounded
        let y = self.lo.sqrt();
        let e = y.mul_add(y, -self.lo);
        let lo = if e > 0.0 { y.next_down() } else { y };
        let y = self.hi.sqrt();
        let e = y.mul_add(y, -self.hi);
        let hi = if e < 0.0 { y.next_up() } else { y };
        Enclosure { lo: lo.max(0.0), hi }
    }

    pub fn exp(self) -> Self {
        let lo = self.lo.exp().next_down().next_down().max(0.0);
        let hi = self.hi.exp().next_up().next_up();
        assert!(hi.is_finite(), "exp overflow in enclosure");
        Enclosure { lo, hi }
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "ln of non-positive enclosure");
        Enclosure {
            lo: self.lo.ln().next_down().next_down(),
            hi: self.hi.ln().next_up().next_up(),
        }
    }

    /// `self^e` for strictly positive base, via exp(e · ln self).
    pub fn pow(self, e: Self) -> Self {
        assert!(self.lo > 0.0, "pow of non-positive base");
        (e * self.ln()).exp()
    }

    /// `self^e` for a point exponent.
    pub fn powf(self, e: f64) -> Self {
        self.pow(Self::point(e))
    }

    /// Small integer powers, valid for any sign of the base.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl std::ops::Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        Enclosure::new(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl std::ops::Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        Enclosure::new(add_down(self.lo, -rhs.hi), add_up(self.hi, -rhs.lo))
    }
}

impl std::ops::Mul for Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: Enclosure) -> Enclosure {
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        Enclosure::new(lo, hi)
    }
}

impl std::ops::Div for Enclosure {
    type Output = Enclosure;
    fn div(self, rhs: Enclosure) -> Enclosure {
        assert!(
            !rhs.contains_zero(),
            "division by enclosure containing zero: {rhs}"
        );
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(div_down(a, b));
            hi = hi.max(div_up(a, b));
        }
        Enclosure::new(lo, hi)
    }
}

impl std::ops::Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure::neg(self)
    }
}

/// `make_enclosure` of the module contract: decimal literal to interval.
pub fn make_enclosure(text: &str) -> Result<Enclosure, ParseError> {
    Enclosure::parse(text)
}
