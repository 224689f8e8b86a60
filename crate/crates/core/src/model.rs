//! Domain types shared by every numerical module, with validation.
//!
//! The solver works in a fixed unit system: lengths in millimetres, times
//! in picoseconds. A scenario is a diffusive medium `(gamma, b)` governed
//! by `(d/dt - gamma Laplace + b) u = 0`, a Robin impedance `beta` from
//! the boundary condition `gamma du/dnu + beta u = g`, a geometry (the
//! half-space `x3 >= 0` or a slab `0 <= x3 <= L`), an impulsive boundary
//! source, and the space-time points where the field is wanted.
//!
//! Validation is report-style: each type lists the constraints it
//! violates, named by field, and an empty report means the value is
//! usable everywhere downstream. Degenerate but finite cases are allowed
//! by design: `b = 0` (no absorption) and `beta = 0` (Neumann boundary)
//! stay inside every closed formula this crate evaluates.
//!
//! All types here are plain immutable values; they can be copied, shared,
//! and sent across threads freely.

use alloc::vec::Vec;

/// Diffusion coefficient `gamma` (mm^2/ps) and absorption rate `b` (1/ps)
/// of the homogeneous medium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumParams {
    pub gamma: f64,
    pub b: f64,
}

/// Impedance `beta` (mm/ps) in the Robin condition `gamma du/dnu + beta u = g`.
/// `beta = 0` is the Neumann problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobinCoefficient {
    pub beta: f64,
}

/// Spatial domain: the half-space `x3 >= 0`, or a slab `0 <= x3 <= width`
/// whose kernel is evaluated by summing `image_truncation` reflected image
/// pairs on each side (adaptive evaluators may stop earlier).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geometry {
    HalfSpace,
    Slab { width: f64, image_truncation: u32 },
}

/// Impulsive source on the boundary plane `x3 = 0`: position `(y1, y2)` in
/// mm, emission time `s` in ps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryImpulse {
    pub y1: f64,
    pub y2: f64,
    pub s: f64,
}

/// Observation point `(x1, x2, x3)` in mm at time `t` in ps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceTimePoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub t: f64,
}

/// Uniform time grid with `count` samples from `t_start` to `t_end`
/// inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub count: u32,
}

impl TimeGrid {
    /// The `i`-th sample; `i = 0` is exactly `t_start` and `i = count - 1`
    /// is exactly `t_end`.
    pub fn time(&self, i: u32) -> f64 {
        let frac = f64::from(i) / f64::from(self.count - 1);
        self.t_start + (self.t_end - self.t_start) * frac
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.time(i)).collect()
    }
}

/// Result of summing the boundary-impedance series at one space-time
/// point: the per-order surface-profile values `w_n` (alternating sign for
/// positive impedance), the cumulative approximations `u_n`, the ratios
/// `|w_n / w_{n-1}|`, the order at which the stopping rule fired, and
/// whether it fired at all within the requested tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct BornEvaluation {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub ratios: Vec<f64>,
    pub n_used: usize,
    pub converged: bool,
    pub tolerance: f64,
}

/// One violated constraint: the offending field and the constraint text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub constraint: &'static str,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: requires {}", self.field, self.constraint)
    }
}

/// Every violated invariant found, with field names; empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl core::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl MediumParams {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.gamma > 0.0) {
            out.push(Violation { field: "gamma", constraint: "gamma > 0" });
        }
        if !(self.b >= 0.0) {
            out.push(Violation { field: "b", constraint: "b >= 0" });
        }
        out
    }
}

impl RobinCoefficient {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.beta >= 0.0) {
            out.push(Violation { field: "beta", constraint: "beta >= 0" });
        }
        out
    }
}

impl Geometry {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Geometry::Slab { width, image_truncation } = *self {
            if !(width > 0.0) {
                out.push(Violation { field: "geometry.L", constraint: "L > 0" });
            }
            if image_truncation < 1 {
                out.push(Violation { field: "geometry.M", constraint: "imageTruncation >= 1" });
            }
        }
        out
    }
}

impl BoundaryImpulse {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.s >= 0.0) {
            out.push(Violation { field: "source.s", constraint: "s >= 0" });
        }
        out
    }
}

impl SpaceTimePoint {
    /// Point constraints depend on the geometry: `x3` must lie inside it.
    pub fn violations_in(&self, geometry: Geometry) -> Vec<Violation> {
        let mut out = Vec::new();
        match geometry {
            Geometry::HalfSpace => {
                if !(self.x3 >= 0.0) {
                    out.push(Violation { field: "point.x3", constraint: "x3 >= 0" });
                }
            }
            Geometry::Slab { width, .. } => {
                if !(self.x3 >= 0.0 && self.x3 <= width) {
                    out.push(Violation { field: "point.x3", constraint: "0 <= x3 <= L" });
                }
            }
        }
        if !(self.t >= 0.0) {
            out.push(Violation { field: "point.t", constraint: "t >= 0" });
        }
        out
    }
}

impl TimeGrid {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.t_start < self.t_end) {
            out.push(Violation { field: "grid.tStart", constraint: "tStart < tEnd" });
        }
        if self.count < 2 {
            out.push(Violation { field: "grid.count", constraint: "count >= 2" });
        }
        out
    }
}

/// Collect every violated invariant of a medium / impedance / geometry
/// triple. An empty report means all three are valid together.
pub fn validate(
    params: MediumParams,
    beta: RobinCoefficient,
    geometry: Geometry,
) -> ValidationReport {
    let mut violations = params.violations();
    violations.extend(beta.violations());
    violations.extend(geometry.violations());
    ValidationReport { violations }
}
