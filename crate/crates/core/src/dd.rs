//! Double-double floating point: unevaluated sums `hi + lo` of two `f64`s
//! carrying roughly 32 significant decimal digits.
//!
//! This is the high-precision layer behind the brute-force oracle and the
//! random-point containment tests. It is plain rounded arithmetic, not
//! interval arithmetic: results are accurate to ~1e-31 relative, and
//! callers that need rigor must fold that slack into an [`crate::rigor`]
//! enclosure themselves.

/// Unevaluated `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b| or a == 0
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

pub const LN2: Dd = Dd {
    hi: 0.693_147_180_559_945_3,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn from_i128(n: i128) -> Dd {
        let hi = n as f64;
        // hi is integral and |hi| <= 2^127, so the cast back is exact
        let r = n - hi as i128;
        let lo = r as f64;
        Dd { hi, lo }
    }

    pub fn from_u128(n: u128) -> Dd {
        let hi = n as f64;
        let r = n as i128 - hi as i128;
        Dd { hi, lo: r as f64 }
    }

    pub fn from_ratio(num: i64, den: i64) -> Dd {
        Dd::from_i128(i128::from(num)).div(Dd::from_i128(i128::from(den)))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul(Dd::from_f64(q1)));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul(Dd::from_f64(q2)));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    /// Exact scaling by 2^k.
    pub fn ldexp(self, k: i32) -> Dd {
        let f = (2.0f64).powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn sqrt(self) -> Dd {
        assert!(self.hi >= 0.0);
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // one Newton step from the f64 seed: y + (x - y^2) / (2y)
        let y = Dd::from_f64(self.hi.sqrt());
        let corr = self.sub(y.mul(y)).div(y.add(y));
        y.add(corr)
    }

    pub fn exp(self) -> Dd {
        let x = self.to_f64();
        assert!(x.abs() < 690.0, "dd exp out of range");
        let k = (x / std::f64::consts::LN_2).round();
        let r = self.sub(LN2.mul(Dd::from_f64(k)));
        // reduce further: e^r = (e^(r/16))^16
        let r16 = r.div(Dd::from_f64(16.0));
        let mut term = r16;
        let mut sum = Dd::ONE.add(r16);
        let mut n = 2.0f64;
        loop {
            term = term.mul(r16).div(Dd::from_f64(n));
            sum = sum.add(term);
            if term.hi.abs() < 1e-36 * sum.hi.abs() || n > 24.0 {
                break;
            }
            n += 1.0;
        }
        for _ in 0..4 {
            sum = sum.mul(sum);
        }
        sum.ldexp(k as i32)
    }

    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0);
        // Newton from the f64 seed plus a quadratic correction:
        // ln x = y0 + d - d^2/2 with d = x e^{-y0} - 1, |d| ~ 1e-16.
        let y0 = self.hi.ln();
        let d = self.mul(Dd::from_f64(-y0).exp()).sub(Dd::ONE);
        let corr = d.sub(d.mul(d).div(Dd::from_f64(2.0)));
        Dd::from_f64(y0).add(corr)
    }

    /// `self^e` for strictly positive base.
    pub fn powf(self, e: Dd) -> Dd {
        assert!(self.hi > 0.0);
        e.mul(self.ln()).exp()
    }

    pub fn lt(self, rhs: Dd) -> bool {
        self.hi < rhs.hi || (self.hi == rhs.hi && self.lo < rhs.lo)
    }

    /// Parse a decimal literal to double-double accuracy (test reference
    /// values are written as 30+ digit strings).
    pub fn parse(text: &str) -> Option<Dd> {
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
        let mut frac: i32 = 0;
        let mut seen_dot = false;
        while i < s.len() {
            match s[i] {
                b'0'..=b'9' => {
                    if digits < 36 {
                        mant = mant * 10 + i128::from(s[i] - b'0');
                        if seen_dot {
                            frac += 1;
                        }
                        digits += 1;
                    } else if !seen_dot {
                        frac -= 1;
                    }
                    i += 1;
                }
                b'.' if !seen_dot => {
                    seen_dot = true;
                    i += 1;
                }
                b'e' | b'E' => break,
                _ => return None,
            }
        }
        if digits == 0 {
            return None;
        }
        let mut exp10: i32 = 0;
        if i < s.len() {
            exp10 = std::str::from_utf8(&s[i + 1..]).ok()?.parse().ok()?;
        }
        let e = exp10 - frac;
        let mut v = Dd::from_i128(mant);
        v = v.mul(pow10_dd(e));
        Some(if neg { v.neg() } else { v })
    }
}

fn pow10_dd(e: i32) -> Dd {
    let mut acc = Dd::ONE;
    let mut base = Dd::from_f64(10.0);
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(base);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(base);
        }
    }
    if e < 0 {
        Dd::ONE.div(acc)
    } else {
        acc
    }
}
