//! Kummer confluent hypergeometric function `1F1(a, b; z)` on the
//! half-integer lattice the Born series visits.
//!
//! The n-th closed-form Born term needs the pair
//!
//! ```text
//! 1F1((1-n)/2, 1/2; -zeta^2)    and    1F1(1-n/2, 3/2; -zeta^2),
//! ```
//!
//! so for each parity of `n` one member terminates (a polynomial, summed
//! exactly: for `z < 0` every coefficient of the terminating series is
//! positive, so it never cancels) and the other sits on the descending
//! half-integer chain `a = b-1, b-2, b-3, ...` below one of the two seeds
//! with an error-function closed form,
//!
//! ```text
//! 1F1(-1/2, 1/2; -w) = e^{-w} + sqrt(pi w) erf(sqrt w),
//! 1F1( 1/2, 3/2; -w) = (1/2) sqrt(pi/w) erf(sqrt w).
//! ```
//!
//! Chain values follow from the three-term recurrence in `a`,
//!
//! ```text
//! 1F1(a-1, b; z) = ((2a - b + z)/(a - b)) 1F1(a, b; z) - (a/(a - b)) 1F1(a+1, b; z),
//! ```
//!
//! seeded by the closed form and `1F1(b, b; z) = e^z`. Descending in `a`
//! is the numerically stable direction here: for `z = -w < 0` the desired
//! solution grows like `w^{-a}` as `a` decreases, dominating the second
//! solution of the recurrence, so relative error shrinks rather than
//! explodes. (The seeds switch to the plain series for `|z| < 1/2`, where
//! the closed forms approach removable `0/0` forms.)

use super::{Scalar, SpecFunError};
use crate::specfun::DDouble;

/// Arguments of `1F1(a, b; z)`. In this solver `a` is an integer or
/// half-integer, `b` is 1/2 or 3/2, and `z = -zeta^2 <= 0`; the type
/// accepts general reals and the evaluator reports what it cannot reach.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KummerArgs {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == libm::round(x)
}

/// Terminating series `1F1(-m, b; z)`, summed exactly as a degree-`m`
/// polynomial by the coefficient recurrence
/// `c_{k+1} = c_k (k - m) z / ((b + k)(k + 1))`.
pub fn kummer_terminating<S: Scalar>(m: u32, b: S, z: S) -> S {
    let mut c = S::from_i32(1);
    let mut sum = c;
    for k in 0..m as i32 {
        c = c * (S::from_i32(k) - S::from_i32(m as i32)) * z
            / ((b + S::from_i32(k)) * S::from_i32(k + 1));
        sum = sum + c;
    }
    sum
}

/// Plain series of `1F1(a, b; z)`, for small `|z|` where it converges in a
/// few dozen terms with negligible cancellation.
fn kummer_direct_series<S: Scalar>(a: S, b: S, z: S) -> S {
    let mut term = S::from_i32(1);
    let mut sum = term;
    for k in 0..120 {
        let kf = S::from_i32(k);
        term = term * (a + kf) * z / ((b + kf) * (kf + S::from_i32(1)));
        sum = sum + term;
        if term.abs() < S::eps() * sum.abs() {
            break;
        }
    }
    sum
}

/// Seed `1F1(b-1, b; z)` for `z <= 0`, via the error-function closed forms
/// away from zero and the plain series near it.
fn chain_seed<S: Scalar>(b_is_one_half: bool, z: S) -> S {
    let half = S::from_f64(0.5);
    if z.to_f64() > -0.5 {
        let b = if b_is_one_half { half } else { S::from_f64(1.5) };
        return kummer_direct_series(b - S::from_i32(1), b, z);
    }
    let w = -z;
    let erf_sw = w.sqrt().erf();
    if b_is_one_half {
        (-w).exp() + (S::pi() * w).sqrt() * erf_sw
    } else {
        half * (S::pi() / w).sqrt() * erf_sw
    }
}

/// `1F1(b - 1 - j, b; z)` for `b` in {1/2, 3/2} and `z <= 0`: `j = 0` is
/// the closed-form seed, deeper values descend the three-term recurrence.
pub fn kummer_chain<S: Scalar>(j: u32, b: f64, z: S) -> Result<S, SpecFunError> {
    let b_is_one_half = if b == 0.5 {
        true
    } else if b == 1.5 {
        false
    } else {
        return Err(SpecFunError::OffLattice);
    };
    if z.to_f64() > 0.0 {
        return Err(SpecFunError::Domain("the half-integer chain is evaluated for z <= 0 only"));
    }
    if z.to_f64() == 0.0 {
        return Ok(S::from_i32(1));
    }
    let b_s = S::from_f64(b);
    let mut upper = z.exp(); // 1F1(b, b; z)
    let mut cur = chain_seed(b_is_one_half, z);
    let mut a = S::from_f64(b - 1.0);
    for _ in 0..j {
        // a - b = -1, -2, ... along the descent; never zero.
        let denom = a - b_s;
        let next = ((a + a - b_s + z) / denom) * cur - (a / denom) * upper;
        upper = cur;
        cur = next;
        a = a - S::from_i32(1);
    }
    Ok(cur)
}

/// One step of the Appendix recurrence: `1F1(a-1, b; z)` from the two
/// supplied higher-`a` values. Singular exactly at `a = b`.
pub fn kummer_recurrence_step(
    a: f64,
    b: f64,
    z: f64,
    f_a: f64,
    f_a_plus_1: f64,
) -> Result<f64, SpecFunError> {
    if a == b {
        return Err(SpecFunError::SingularRecurrence);
    }
    Ok((2.0 * a - b + z) / (a - b) * f_a - a / (a - b) * f_a_plus_1)
}

/// `1F1(a, b; z)` on the supported lattice: terminating `a` exactly; `a = b`
/// as `e^z`; half-integer `a` with `b` in {1/2, 3/2} and `z <= 0` through
/// the descending chain, evaluated in double-double and rounded once.
pub fn kummer_1f1(args: KummerArgs) -> Result<f64, SpecFunError> {
    let KummerArgs { a, b, z } = args;
    if is_nonpositive_integer(b) {
        return Err(SpecFunError::Domain("1F1 is undefined for b a nonpositive integer"));
    }
    if a == 0.0 || z == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        if a < -500.0 {
            return Err(SpecFunError::Domain("terminating order beyond the supported range"));
        }
        let m = (-a) as u32;
        return Ok(
            kummer_terminating::<DDouble>(m, DDouble::from_f64(b), DDouble::from_f64(z)).to_f64()
        );
    }
    if a == b {
        return Ok(libm::exp(z));
    }
    let two_a = 2.0 * a;
    let a_is_half_integer = two_a == libm::round(two_a) && libm::round(two_a) as i64 % 2 != 0;
    if (b == 0.5 || b == 1.5) && a_is_half_integer && a <= b - 1.0 {
        let j = (b - 1.0 - a) as u32;
        return kummer_chain::<DDouble>(j, b, DDouble::from_f64(z)).map(DDouble::to_f64);
    }
    Err(SpecFunError::OffLattice)
}
