//! Special functions for the closed-form Born terms: error functions, the
//! Euler Beta function, double factorials, and the Kummer confluent
//! hypergeometric function on the half-integer lattice the series lives on.
//!
//! Every Born order combines three ingredients,
//!
//! ```text
//! w_n(x3, t) ~ [Beta-function constant] x [1F1 profiles in -zeta^2],
//! zeta = x3 / sqrt(4 gamma (t - t0)),
//! ```
//!
//! so this module provides exactly those: `erf`/`erfc` and the scaled
//! complement `erfcx` (the exact Robin solution would overflow without it),
//! `beta_fn`, `double_factorial`, and `kummer_1f1` with the downward
//! recurrence in the first parameter.
//!
//! Two error-function series are implemented and cross-checked: the
//! alternating Maclaurin series and the positive-term series
//! `erf(x) = (2/sqrt(pi)) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!`. The
//! positive series is the production path for `|x| <= 3` (no cancellation);
//! beyond that the Laplace continued fraction for `erfcx` takes over.
//!
//! Everything numeric is generic over [`Scalar`], instantiated at `f64` for
//! speed and at [`ddouble::DDouble`] (~31 significant digits) where the Born
//! bracket loses digits to cancellation.

pub mod ddouble;
mod kummer;

pub use ddouble::DDouble;
pub use kummer::{
    kummer_1f1, kummer_chain, kummer_recurrence_step, kummer_terminating, KummerArgs,
};

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Errors from the special-function layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecFunError {
    /// An argument violated a documented precondition.
    Domain(&'static str),
    /// The three-term recurrence was invoked at its singular point `a = b`.
    SingularRecurrence,
    /// `kummer_1f1` was asked for parameters off the supported lattice
    /// (terminating `a`, or half-integer `a` with `b` in {1/2, 3/2}).
    OffLattice,
}

impl fmt::Display for SpecFunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecFunError::Domain(what) => write!(f, "domain error: {what}"),
            SpecFunError::SingularRecurrence => {
                write!(f, "Kummer recurrence is singular at a = b")
            }
            SpecFunError::OffLattice => {
                write!(f, "1F1 parameters outside the supported half-integer lattice")
            }
        }
    }
}

impl core::error::Error for SpecFunError {}

/// Real scalar the solver's formulas are written against: `f64` for the
/// fast path, [`DDouble`] where cancellation demands ~31 digits.
pub trait Scalar:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn from_i32(k: i32) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    fn erf(self) -> Self;
    fn pi() -> Self;
    /// Unit roundoff of the representation.
    fn eps() -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_i32(k: i32) -> Self {
        k as f64
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        libm::fabs(self)
    }
    #[inline]
    fn exp(self) -> Self {
        libm::exp(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
    #[inline]
    fn erf(self) -> Self {
        erf(self)
    }
    #[inline]
    fn pi() -> Self {
        core::f64::consts::PI
    }
    #[inline]
    fn eps() -> Self {
        f64::EPSILON
    }
}

impl Scalar for DDouble {
    #[inline]
    fn from_f64(x: f64) -> Self {
        DDouble::from_f64(x)
    }
    #[inline]
    fn from_i32(k: i32) -> Self {
        DDouble::from_i32(k)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        DDouble::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Self {
        DDouble::abs(self)
    }
    #[inline]
    fn exp(self) -> Self {
        DDouble::exp(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        DDouble::sqrt(self)
    }
    #[inline]
    fn erf(self) -> Self {
        DDouble::erf(self)
    }
    #[inline]
    fn pi() -> Self {
        DDouble::PI
    }
    #[inline]
    fn eps() -> Self {
        DDouble::eps()
    }
}

/// Truncation rule shared by the series in this module: stop once a term
/// drops below 1e-17 of the running sum, cap at 500 terms.
const SERIES_TERM_FLOOR: f64 = 1e-17;
const SERIES_CAP: usize = 500;

/// Positive-term error-function series,
/// `erf(x) = (2/sqrt(pi)) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!`.
///
/// All terms share one sign, so the sum never cancels; the `e^{-x^2}`
/// prefactor carries the decay. Accurate for any `x`, efficient for
/// `|x| <= 3`; public so the agreement with the alternating form is
/// testable on their overlap.
pub fn erf_positive_series(xi: f64) -> f64 {
    let x2 = xi * xi;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..SERIES_CAP {
        term *= 2.0 * x2 / (2.0 * n as f64 + 1.0);
        sum += term;
        if term < SERIES_TERM_FLOOR * sum {
            break;
        }
    }
    2.0 / libm::sqrt(core::f64::consts::PI) * xi * libm::exp(-x2) * sum
}

/// Alternating Maclaurin error-function series,
/// `erf(x) = (2/sqrt(pi)) sum_n (-1)^n x^{2n+1} / (n! (2n+1))`.
///
/// Cancels catastrophically for large `|x|`; kept for small arguments and
/// as the independent cross-check of [`erf_positive_series`].
pub fn erf_alternating_series(xi: f64) -> f64 {
    let x2 = xi * xi;
    let mut power = xi; // x^{2n+1} / n!
    let mut sum = xi;
    for n in 1..SERIES_CAP {
        power *= -x2 / n as f64;
        let term = power / (2.0 * n as f64 + 1.0);
        sum += term;
        if libm::fabs(term) < SERIES_TERM_FLOOR * libm::fabs(sum) {
            break;
        }
    }
    2.0 / libm::sqrt(core::f64::consts::PI) * sum
}

/// Laplace continued fraction for `erfcx(x) = e^{x^2} erfc(x)`, `x >= 2`:
/// `sqrt(pi) erfcx(x) = 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`,
/// evaluated by the modified Lentz algorithm.
fn erfcx_continued_fraction(xi: f64) -> f64 {
    debug_assert!(xi >= 2.0);
    let tiny = 1e-300;
    let mut f = xi;
    let mut c = xi;
    let mut d = 0.0;
    for n in 1..200 {
        let a = n as f64 / 2.0;
        d = xi + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = xi + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if libm::fabs(delta - 1.0) < 1e-17 {
            break;
        }
    }
    1.0 / (libm::sqrt(core::f64::consts::PI) * f)
}

/// Error function. Positive series on `|x| <= 3`, complement of the
/// continued-fraction `erfc` beyond; odd in `x`.
pub fn erf(xi: f64) -> f64 {
    if xi < 0.0 {
        return -erf(-xi);
    }
    if xi <= 3.0 {
        erf_positive_series(xi)
    } else {
        1.0 - erfc(xi)
    }
}

/// Complementary error function `erfc(x) = 1 - erf(x)`; constructed as the
/// exact complement of whichever route is accurate in each range, so
/// `erf + erfc = 1` holds to roundoff everywhere.
pub fn erfc(xi: f64) -> f64 {
    if xi < 0.0 {
        return 2.0 - erfc(-xi);
    }
    if xi <= 2.0 {
        1.0 - erf_positive_series(xi)
    } else {
        libm::exp(-xi * xi) * erfcx_continued_fraction(xi)
    }
}

/// Scaled complementary error function `erfcx(x) = e^{x^2} erfc(x)`,
/// finite for every representable `x >= 0`. This is the factor that keeps
/// the exact Robin solution overflow-free: the product
/// `e^{(beta/gamma)(x3 + beta dt)} erfc(arg)` is rewritten through it.
pub fn erfcx(xi: f64) -> f64 {
    if xi < 0.0 {
        // erfc(-x) = 2 - erfc(x); overflows (correctly) for very negative x.
        return 2.0 * libm::exp(xi * xi) - erfcx(-xi);
    }
    if xi < 2.0 {
        libm::exp(xi * xi) * (1.0 - erf_positive_series(xi))
    } else {
        erfcx_continued_fraction(xi)
    }
}

/// Euler Beta function `B(a, b)` for positive arguments, through
/// `exp(lgamma(a) + lgamma(b) - lgamma(a+b))`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64, SpecFunError> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(SpecFunError::Domain("beta_fn requires a > 0 and b > 0"));
    }
    let (la, _) = libm::lgamma_r(a);
    let (lb, _) = libm::lgamma_r(b);
    let (lab, _) = libm::lgamma_r(a + b);
    Ok(libm::exp(la + lb - lab))
}

/// Double factorial `k!! = k (k-2) (k-4) ...` with the series' convention
/// `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> Result<f64, SpecFunError> {
    if k < -1 {
        return Err(SpecFunError::Domain("double_factorial requires k >= -1"));
    }
    let mut acc = 1.0f64;
    let mut j = k;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    Ok(acc)
}

/// The double-factorial ratio `f(j) = (j-2)!! / (j-1)!!` by the exact
/// recurrence `f(j) = 1 / ((j-1) f(j-1))`, `f(1) = 1`. Successive Born
/// orders are linked by `B(j/2, 1/2) = 2 f(j)` (j even) and `pi f(j)`
/// (j odd), so iterating `f` evaluates the telescoped Beta product without
/// a Gamma function, exactly enough for double-double work.
pub(crate) fn dfact_ratio_iter<S: Scalar>(j: u32, prev: S) -> S {
    debug_assert!(j >= 2);
    S::from_i32(1) / (S::from_i32(j as i32 - 1) * prev)
}

/// `B(j/2, 1/2)` on the lattice `j = 1, 2, 3, ...` via the parity closed
/// forms above; exact products of small rationals in `S`.
pub(crate) fn beta_half_lattice<S: Scalar>(j: u32) -> S {
    let mut f = S::from_i32(1);
    for i in 2..=j {
        f = dfact_ratio_iter(i, f);
    }
    if j.is_multiple_of(2) {
        S::from_i32(2) * f
    } else {
        S::pi() * f
    }
}
