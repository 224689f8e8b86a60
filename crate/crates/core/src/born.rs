//! Terms of the boundary-impedance perturbation series for the
//! half-space, their closed-form and quadrature evaluations, partial
//! sums, and convergence diagnostics.
//!
//! For an impulse on the boundary at time `t0`, the field with Robin
//! impedance `beta` expands as `u = v0 + v1 + ...`, where each term
//! factors into a known transverse Gaussian and a surface profile
//! `w_n(x3, t)`:
//!
//! ```text
//! v_n(x,t) = e^{-b dt}/dt * e^{-(x1^2+x2^2)/(4 gamma dt)} * w_n(x3, t),
//! dt = t - t0.
//! ```
//!
//! The profiles obey `w_n = (-beta/sqrt(pi gamma)) int w_{n-1}(0,s)
//! (t-s)^{-1/2} e^{-x3^2/(4 gamma (t-s))} ds` and are known in closed
//! form: with `zeta = x3 / sqrt(4 gamma dt)` and `z = zeta^2`,
//!
//! ```text
//! w_0 = e^{-z} / (4 (pi gamma)^{3/2} sqrt(dt)),
//! w_n = w_n(0,t) * shape_n(zeta),    n >= 1,
//! shape_n = 1F1((1-n)/2, 1/2; -z)
//!         - (2 sqrt(pi) zeta / B(n/2, 1/2)) 1F1(1-n/2, 3/2; -z),
//! ```
//!
//! where the surface values follow the one-term recurrence
//! `w_n(0,t) = w_{n-1}(0,t) * (-beta) sqrt(dt/(pi gamma)) B(n/2, 1/2)`
//! from `w_1(0,t) = -beta/(4 pi gamma^2)`. Signs therefore alternate
//! exactly, and `shape_n(0) = 1`.
//!
//! `shape_n` hides a cancellation whose magnitude grows roughly like
//! `10^{1.25 sqrt(n z)}` (measured), so every evaluation carries an
//! a-posteriori condition estimate: the sum of the two Kummer term
//! magnitudes over the magnitude of their difference. Evaluation starts
//! in f64 where a cheap predictor says it is safe, falls back to
//! double-double when the condition estimate disagrees, and flushes the
//! term to zero when even double-double retains no digits. Flushed
//! terms satisfy `n zeta^2 >~ 500`, where the true profile is tens of
//! orders of magnitude below the leading term and below anything a
//! partial sum can resolve; returning zero there keeps sums and
//! diagnostics finite instead of propagating rounding noise. Inside
//! `n zeta^2 <~ 280` the returned values are good to about ten
//! significant digits. The quadrature route (`wn_oracle`) evaluates the
//! recurrence integral directly from the surface closed forms and
//! exists to check the special-function route against an independent
//! path.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernels::{boundary_convolution, BoundarySourceSamples, ConvolutionResult};
use crate::model::{
    BornEvaluation, BoundaryImpulse, Geometry, MediumParams, RobinCoefficient, SpaceTimePoint,
};
use crate::quad::{integrate, QuadOptions};
use crate::specfun::{beta_half_lattice, kummer_chain, kummer_terminating, DDouble, Scalar};

use core::f64::consts::PI;

/// Shared scenario for term evaluation: medium, impedance, source time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BornTermContext {
    pub medium: MediumParams,
    pub beta: RobinCoefficient,
    pub t0: f64,
}

impl BornTermContext {
    /// Dimensionless similarity variable `zeta = x3 / sqrt(4 gamma (t - t0))`.
    pub fn zeta(&self, x3: f64, t: f64) -> f64 {
        debug_assert!(t > self.t0 && x3 >= 0.0);
        x3 / libm::sqrt(4.0 * self.medium.gamma * (t - self.t0))
    }
}

/// Cheap predictor for trying f64 first in `wn_closed`: measured digit
/// loss in `shape_n` stays small while `zeta^2 + 0.55 n` is small.
const F64_PREDICTOR_BOUND: f64 = 6.5;

/// Largest condition estimate accepted from the f64 `shape_n` path;
/// keeps the accepted relative error near 1e-11.
const F64_CONDITION_LIMIT: f64 = 1e4;

/// Largest condition estimate accepted from the double-double path;
/// beyond it fewer than a few digits survive and the term is flushed.
const DD_CONDITION_LIMIT: f64 = 1e26;

/// Consecutive below-tolerance increments required to declare the partial
/// sums converged.
const CONVERGENCE_STREAK: u32 = 3;

/// Time samples used by `convergence_report` for its over-the-grid maxima.
const REPORT_GRID: u32 = 64;

/// Hard order cap for `convergence_report`.
const REPORT_ORDER_CAP: u32 = 200;

/// Zeroth profile `w_0(x3, t)`; zero for `t <= t0`.
pub fn w0(x3: f64, t: f64, ctx: &BornTermContext) -> f64 {
    let dt = t - ctx.t0;
    if dt <= 0.0 {
        return 0.0;
    }
    let z = x3 * x3 / (4.0 * ctx.medium.gamma * dt);
    libm::exp(-z) / (4.0 * libm::pow(PI * ctx.medium.gamma, 1.5) * libm::sqrt(dt))
}

/// Surface value `w_n(0, t)` by the exact ratio recurrence; the workhorse
/// both for assembling `wn_closed` and for the quadrature oracle's
/// integrand.
pub fn wn_at_surface(n: u32, t: f64, ctx: &BornTermContext) -> f64 {
    let dt = t - ctx.t0;
    if dt <= 0.0 {
        return 0.0;
    }
    let gamma = ctx.medium.gamma;
    if n == 0 {
        return 1.0 / (4.0 * libm::pow(PI * gamma, 1.5) * libm::sqrt(dt));
    }
    let beta = ctx.beta.beta;
    if beta == 0.0 {
        return 0.0;
    }
    let mut w = -beta / (4.0 * PI * gamma * gamma);
    // w_j(0)/w_{j-1}(0) = -beta sqrt(dt/(pi gamma)) B(j/2, 1/2), where
    // B(j/2, 1/2) is 2 f(j) for even j and pi f(j) for odd j with
    // f(j) = (j-2)!!/(j-1)!! built by f(j) = 1/((j-1) f(j-1)).
    let scale = beta * libm::sqrt(dt / (PI * gamma));
    let mut f = 1.0;
    for j in 2..=n {
        f = 1.0 / ((j - 1) as f64 * f);
        let beta_half = if j % 2 == 0 { 2.0 * f } else { PI * f };
        w *= -scale * beta_half;
    }
    w
}

/// `shape_n(zeta)` evaluated in scalar type `S`; equals `w_n / w_n(0,t)`.
/// One of the two Kummer factors terminates for each parity, the other
/// descends the half-integer chain from its error-function seed. Returns
/// the value together with its condition estimate, the ratio of the sum
/// of the two term magnitudes to the magnitude of their difference: the
/// relative error of the result is about the condition times the
/// arithmetic's epsilon.
fn shape<S: Scalar>(n: u32, x3: f64, four_gamma_dt: f64) -> (S, f64) {
    let x3s = S::from_f64(x3);
    let z = x3s * x3s / S::from_f64(four_gamma_dt);
    let zeta = z.sqrt();
    let on_lattice = "half-integer chain arguments are valid by construction";
    let (f1, f2) = if n.is_multiple_of(2) {
        let f1 = kummer_chain::<S>((n - 2) / 2, 0.5, -z).expect(on_lattice);
        let f2 = kummer_terminating::<S>(n / 2 - 1, S::from_f64(1.5), -z);
        (f1, f2)
    } else {
        let f1 = kummer_terminating::<S>((n - 1) / 2, S::from_f64(0.5), -z);
        let f2 = kummer_chain::<S>((n - 1) / 2, 1.5, -z).expect(on_lattice);
        (f1, f2)
    };
    let b = beta_half_lattice::<S>(n);
    let second = S::from_i32(2) * S::pi().sqrt() * zeta / b * f2;
    let value = f1 - second;
    let magnitude = value.abs().to_f64();
    let condition = if magnitude == 0.0 {
        f64::INFINITY
    } else {
        (f1.abs() + second.abs()).to_f64() / magnitude
    };
    (value, condition)
}

/// Closed-form profile `w_n(x3, t)`: the surface value times `shape_n`.
/// The f64 path is tried where a predictor says it is cheap and kept only
/// if its condition estimate confirms it; otherwise double-double takes
/// over. When even double-double retains no digits the term is flushed to
/// zero (see the module notes on the supported region).
pub fn wn_closed(n: u32, x3: f64, t: f64, ctx: &BornTermContext) -> f64 {
    if n == 0 {
        return w0(x3, t, ctx);
    }
    let dt = t - ctx.t0;
    if dt <= 0.0 {
        return 0.0;
    }
    let surface = wn_at_surface(n, t, ctx);
    if surface == 0.0 || x3 == 0.0 {
        return surface;
    }
    let four_gamma_dt = 4.0 * ctx.medium.gamma * dt;
    let z = x3 * x3 / four_gamma_dt;
    if z + 0.55 * f64::from(n) <= F64_PREDICTOR_BOUND {
        let (s, condition) = shape::<f64>(n, x3, four_gamma_dt);
        if condition <= F64_CONDITION_LIMIT {
            return surface * s;
        }
    }
    let (s, condition) = shape::<DDouble>(n, x3, four_gamma_dt);
    if condition <= DD_CONDITION_LIMIT {
        surface * s.to_f64()
    } else {
        0.0
    }
}

/// Quadrature failed to reach the requested relative tolerance; the best
/// value found and the tolerance actually achieved come along.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleError {
    pub best: f64,
    pub achieved: f64,
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "recurrence quadrature reached {:e} relative (best estimate {:e})",
            self.achieved, self.best
        )
    }
}

impl core::error::Error for OracleError {}

/// Profile `w_n(x3, t)` by adaptive quadrature of the recurrence
/// integral, using only surface closed forms in the integrand. The two
/// integrable endpoint behaviors are absorbed by substitutions: on the
/// half near `s = t`, `t - s = dt sigma^2` flattens the `(t-s)^{-1/2}`
/// factor; on the half near `s = t0`, `t - s = dt (1 - rho^2)` flattens
/// the `(s-t0)^{(n-2)/2}` vanishing of the surface profile.
pub fn wn_oracle(
    n: u32,
    x3: f64,
    t: f64,
    ctx: &BornTermContext,
    quad_tol: f64,
) -> Result<f64, OracleError> {
    debug_assert!(n >= 1 && quad_tol > 0.0);
    let dt = t - ctx.t0;
    if dt <= 0.0 {
        return Ok(0.0);
    }
    let gamma = ctx.medium.gamma;
    let zeta_sq = x3 * x3 / (4.0 * gamma * dt);
    let surface_prev = |s: f64| wn_at_surface(n - 1, s, ctx);
    let opts = QuadOptions { rel_tol: quad_tol / 4.0, ..QuadOptions::default() };
    let half = libm::sqrt(0.5);
    let near_t = integrate(
        |sigma| {
            let gauss = if zeta_sq == 0.0 { 1.0 } else { libm::exp(-zeta_sq / (sigma * sigma)) };
            surface_prev(t - dt * sigma * sigma) * gauss
        },
        0.0,
        half,
        opts,
    );
    let near_t0 = integrate(
        |rho| {
            let tau = 1.0 - rho * rho;
            rho / libm::sqrt(tau) * libm::exp(-zeta_sq / tau) * surface_prev(t - dt * tau)
        },
        0.0,
        half,
        opts,
    );
    let prefactor = -2.0 * ctx.beta.beta * libm::sqrt(dt / (PI * gamma));
    let (v1, e1) = match near_t {
        Ok(r) => (r.value, r.error_estimate),
        Err(e) => (e.best.value, e.best.error_estimate),
    };
    let (v2, e2) = match near_t0 {
        Ok(r) => (r.value, r.error_estimate),
        Err(e) => (e.best.value, e.best.error_estimate),
    };
    let best = prefactor * (v1 + v2);
    let abs_err = libm::fabs(prefactor) * (e1 + e2);
    let achieved = if best == 0.0 {
        if abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        abs_err / libm::fabs(best)
    };
    if near_t.is_ok() && near_t0.is_ok() && achieved <= quad_tol {
        Ok(best)
    } else {
        Err(OracleError { best, achieved })
    }
}

fn ratio_of(current: f64, previous: f64) -> f64 {
    if previous == 0.0 {
        if current == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        libm::fabs(current / previous)
    }
}

/// All terms through `n_max` at one space-time point, assembled into
/// partial sums with the transverse Gaussian prefactor. A general source
/// reduces to the origin case by translation in `(x1, x2)` and a shift of
/// `t0`. Convergence is declared once three consecutive relative
/// increments fall below `tolerance` (at `beta = 0` the series is its
/// zeroth term, immediately converged).
pub fn born_partial_sum(
    n_max: u32,
    p: SpaceTimePoint,
    src: BoundaryImpulse,
    medium: MediumParams,
    beta: RobinCoefficient,
    tolerance: f64,
) -> BornEvaluation {
    let len = n_max as usize + 1;
    let dt = p.t - src.s;
    if dt <= 0.0 {
        // Nothing has arrived yet; the zero field is exact.
        return BornEvaluation {
            terms: vec![0.0; len],
            partial_sums: vec![0.0; len],
            ratios: vec![0.0; len.saturating_sub(1)],
            n_used: 0,
            converged: true,
            tolerance,
        };
    }
    let ctx = BornTermContext { medium, beta, t0: src.s };
    let d1 = p.x1 - src.y1;
    let d2 = p.x2 - src.y2;
    let rho_sq = d1 * d1 + d2 * d2;
    let prefactor = libm::exp(-medium.b * dt - rho_sq / (4.0 * medium.gamma * dt)) / dt;

    let terms: Vec<f64> = (0..=n_max).map(|n| wn_closed(n, p.x3, p.t, &ctx)).collect();
    // Compensated running sum keeps the alternating cancellation from
    // contaminating every later partial sum.
    let mut profile_sums = Vec::with_capacity(len);
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for &w in &terms {
        let fresh = sum + w;
        compensation +=
            if libm::fabs(sum) >= libm::fabs(w) { (sum - fresh) + w } else { (w - fresh) + sum };
        sum = fresh;
        profile_sums.push(sum + compensation);
    }
    let partial_sums: Vec<f64> = profile_sums.iter().map(|s| prefactor * s).collect();
    let ratios: Vec<f64> = (1..len).map(|n| ratio_of(terms[n], terms[n - 1])).collect();

    let mut converged = false;
    let mut n_used = n_max as usize;
    if beta.beta == 0.0 {
        converged = true;
        n_used = 0;
    } else {
        let mut streak = 0;
        for n in 1..len {
            let increment = ratio_of(terms[n], profile_sums[n]);
            if increment < tolerance {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak == CONVERGENCE_STREAK {
                converged = true;
                n_used = n;
                break;
            }
        }
    }
    BornEvaluation { terms, partial_sums, ratios, n_used, converged, tolerance }
}

/// Convergence diagnostics for fixed `x3` over `(t0, t_end]`: whether the
/// sufficient impedance bound `beta < 2 sqrt(gamma/pi)` holds, the
/// smallest order whose worst-over-grid relative increment is below
/// `tol`, and the worst-over-grid term ratios whose decay like
/// `C/sqrt(n)` makes the series converge for every impedance.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// `2 sqrt(gamma/pi)`: impedances below it converge by the L1 bound.
    pub sufficient_bound: f64,
    pub sufficient_condition_holds: bool,
    /// Smallest `n` with `max_t |w_n / sum_{j<=n} w_j| < tol`, if any
    /// order up to the cap achieved it.
    pub smallest_n: Option<u32>,
    /// Entry `n`: `max_t |w_n / sum_{j<=n} w_j|`; entry 0 is 1 by
    /// convention. Ends where the increments stayed below `tol` three
    /// times in a row, or at the order cap.
    pub max_increments: Vec<f64>,
    /// Entry `n - 1`: `max_t |w_n / w_{n-1}|`.
    pub max_ratios: Vec<f64>,
}

pub fn convergence_report(
    medium: MediumParams,
    beta: RobinCoefficient,
    t0: f64,
    t_end: f64,
    x3: f64,
    tol: f64,
) -> ConvergenceReport {
    let sufficient_bound = 2.0 * libm::sqrt(medium.gamma / PI);
    let sufficient_condition_holds = beta.beta < sufficient_bound;
    if beta.beta == 0.0 {
        // The series is its zeroth term.
        return ConvergenceReport {
            sufficient_bound,
            sufficient_condition_holds,
            smallest_n: Some(0),
            max_increments: vec![1.0],
            max_ratios: Vec::new(),
        };
    }
    let ctx = BornTermContext { medium, beta, t0 };
    let times: Vec<f64> = (1..=REPORT_GRID)
        .map(|i| t0 + (t_end - t0) * f64::from(i) / f64::from(REPORT_GRID))
        .collect();
    let mut prev: Vec<f64> = times.iter().map(|&t| wn_closed(0, x3, t, &ctx)).collect();
    let mut sums = prev.clone();
    let mut compensations = vec![0.0; times.len()];
    // A grid point whose term flushed to zero is finished: its remaining
    // terms are below anything the sum can resolve, so it stops feeding
    // the maxima instead of injecting rounding noise.
    let mut finished = vec![false; times.len()];
    let mut max_increments = vec![1.0];
    let mut max_ratios = Vec::new();
    let mut smallest_n = None;
    let mut streak = 0;
    for n in 1..=REPORT_ORDER_CAP {
        let mut max_ratio = 0.0f64;
        let mut max_increment = 0.0f64;
        for (i, &t) in times.iter().enumerate() {
            if finished[i] {
                continue;
            }
            let w = wn_closed(n, x3, t, &ctx);
            if w == 0.0 {
                finished[i] = true;
                continue;
            }
            max_ratio = max_ratio.max(ratio_of(w, prev[i]));
            let fresh = sums[i] + w;
            compensations[i] += if libm::fabs(sums[i]) >= libm::fabs(w) {
                (sums[i] - fresh) + w
            } else {
                (w - fresh) + sums[i]
            };
            sums[i] = fresh;
            max_increment = max_increment.max(ratio_of(w, sums[i] + compensations[i]));
            prev[i] = w;
        }
        max_ratios.push(max_ratio);
        max_increments.push(max_increment);
        if max_increment < tol {
            if smallest_n.is_none() {
                smallest_n = Some(n);
            }
            streak += 1;
        } else {
            streak = 0;
        }
        if streak == CONVERGENCE_STREAK {
            break;
        }
    }
    ConvergenceReport {
        sufficient_bound,
        sufficient_condition_holds,
        smallest_n,
        max_increments,
        max_ratios,
    }
}

/// Experimental: one step of the boundary-integral iteration
/// `v_n(x,t) = -beta int G(x,t;y1,y2,s) v_{n-1}(y1,y2,0,s) dy1 dy2 ds`,
/// with the previous term supplied as boundary samples. This is the only
/// series path available in the slab, where no closed-form profiles
/// exist; accuracy is limited by the caller's sampling grid.
pub fn born_iteration_step(
    previous_boundary: &BoundarySourceSamples,
    p: SpaceTimePoint,
    medium: MediumParams,
    beta: RobinCoefficient,
    geometry: Geometry,
) -> ConvolutionResult {
    let conv = boundary_convolution(previous_boundary, p, medium, geometry);
    ConvolutionResult { value: -beta.beta * conv.value, ..conv }
}
