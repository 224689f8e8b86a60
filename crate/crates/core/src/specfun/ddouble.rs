//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s
//! carrying roughly 31 significant decimal digits.
//!
//! The closed-form Born terms combine a Beta-function constant with two
//! confluent hypergeometric values whose difference cancels like
//! `exp(-zeta^2)`, and the surface recurrence alternates in sign, so for
//! deep orders or large `zeta` plain `f64` runs out of digits. Everything
//! here is the classical error-free-transformation toolkit: `two_sum` and
//! `two_prod` (the latter through a fused multiply-add) capture the exact
//! rounding error of each `f64` operation, and the compound operations
//! renormalize so that `|lo| <= ulp(hi)/2` is maintained.
//!
//! Only the operations the solver needs are provided: field arithmetic,
//! comparisons, `sqrt`, `exp`, and `erf`. `exp` reduces the argument by the
//! nearest multiple of `ln 2` and sums the Taylor series of the remainder;
//! `erf` sums the positive-term series
//! `erf(x) = (2/sqrt(pi)) e^{-x^2} sum_n (2x^2)^n x / (2n+1)!!`,
//! whose terms all share one sign, so its accuracy is limited only by the
//! working precision, never by cancellation.

use core::cmp::Ordering;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// `hi + lo` with `|lo| <= ulp(hi)/2`; together ~106 bits of significand.
#[derive(Clone, Copy, Debug, Default)]
pub struct DDouble {
    pub hi: f64,
    pub lo: f64,
}

/// Exact sum: returns `(s, e)` with `s = fl(a+b)` and `a + b = s + e`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `two_sum` specialization valid when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Exact product via FMA: `a * b = p + e`.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = libm::fma(a, b, -p);
    (p, e)
}

impl DDouble {
    pub const ZERO: DDouble = DDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DDouble = DDouble { hi: 1.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: DDouble = DDouble { hi: core::f64::consts::PI, lo: 1.2246467991473532e-16 };
    /// ln 2 to double-double precision.
    pub const LN2: DDouble = DDouble { hi: core::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        DDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_i32(k: i32) -> Self {
        DDouble { hi: k as f64, lo: 0.0 }
    }

    /// Round to nearest `f64`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    /// Unit roundoff of the format, ~4.93e-32.
    #[inline]
    pub fn eps() -> Self {
        DDouble::from_f64(4.93e-32)
    }

    /// Multiply by 2^k exactly (both components scale exactly).
    #[inline]
    fn ldexp(self, k: i32) -> Self {
        DDouble { hi: libm::ldexp(self.hi, k), lo: libm::ldexp(self.lo, k) }
    }

    /// Newton step from the `f64` square root recovers full precision:
    /// one iteration of `y <- y + (x - y^2) / (2y)` doubles correct digits.
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return DDouble::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of a negative double-double");
        let y0 = libm::sqrt(self.hi);
        let y = DDouble::from_f64(y0);
        y + (self - y * y) / (y + y)
    }

    /// `exp(self)` by range reduction: with `k = round(x / ln 2)` and
    /// `r = x - k ln 2`, `|r| <= ln(2)/2` and the Taylor series of `e^r`
    /// reaches the working precision within 40 terms.
    pub fn exp(self) -> Self {
        let k = libm::round(self.hi / core::f64::consts::LN_2);
        // e^x underflows f64 well before |k| reaches 1400.
        if k < -1400.0 {
            return DDouble::ZERO;
        }
        debug_assert!(k < 1024.0, "exp overflow in double-double");
        let r = self - DDouble::LN2 * DDouble::from_f64(k);
        let mut term = DDouble::ONE;
        let mut sum = DDouble::ONE;
        for n in 1..40 {
            term = term * r / DDouble::from_i32(n);
            sum = sum + term;
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        sum.ldexp(k as i32)
    }

    /// Positive-term error-function series; exact complement saturation
    /// (`erf = 1`) once the tail is below the working precision.
    pub fn erf(self) -> Self {
        if self.is_sign_negative() {
            return -((-self).erf());
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return DDouble::ZERO;
        }
        // erfc(15) ~ 7e-100, far below the double-double resolution of 1.
        if self.hi >= 15.0 {
            return DDouble::ONE;
        }
        let x2 = self * self;
        let two_x2 = x2 + x2;
        // sum_n (2x^2)^n / (2n+1)!!, all terms positive
        let mut term = DDouble::ONE;
        let mut sum = DDouble::ONE;
        for n in 1..700 {
            term = term * two_x2 / DDouble::from_i32(2 * n + 1);
            sum = sum + term;
            if term.hi < 1e-35 * sum.hi {
                break;
            }
        }
        let pref = (self + self) / DDouble::PI.sqrt() * (-x2).exp();
        pref * sum
    }
}

impl Add for DDouble {
    type Output = DDouble;
    #[inline]
    fn add(self, rhs: DDouble) -> DDouble {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        DDouble { hi, lo }
    }
}

impl Sub for DDouble {
    type Output = DDouble;
    #[inline]
    fn sub(self, rhs: DDouble) -> DDouble {
        self + (-rhs)
    }
}

impl Neg for DDouble {
    type Output = DDouble;
    #[inline]
    fn neg(self) -> DDouble {
        DDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for DDouble {
    type Output = DDouble;
    #[inline]
    fn mul(self, rhs: DDouble) -> DDouble {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        DDouble { hi, lo }
    }
}

impl Div for DDouble {
    type Output = DDouble;
    #[inline]
    fn div(self, rhs: DDouble) -> DDouble {
        // Two quotient digits plus a correction bound the error by O(eps^2).
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DDouble::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DDouble::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        DDouble { hi: s, lo: e } + DDouble::from_f64(q3)
    }
}

impl PartialEq for DDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}
