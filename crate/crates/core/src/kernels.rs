//! Diffusion kernels for free space, the half-space with a reflecting
//! boundary, and the slab, plus the boundary-source convolution.
//!
//! Everything is built from the causal free-space kernel of
//! `(d/dt - gamma Laplace + b)`,
//!
//! ```text
//! K(x,t;y,s) = theta(t-s) e^{-b(t-s)} / (4 pi gamma (t-s))^{3/2}
//!              * exp(-|x-y|^2 / (4 gamma (t-s))),
//! ```
//!
//! with the `t = s` limit resolved to zero. A Neumann (no-flux) boundary
//! at `x3 = 0` with the source on that plane doubles the kernel by the
//! method of images, `G = 2K` at `y3 = 0`; a slab `0 <= x3 <= L` with
//! no-flux walls on both faces replaces the single image by the
//! even-periodic family at `y3 = 2mL`,
//!
//! ```text
//! G_slab = 2 sum_m K(x,t; (y1,y2,2mL), s),    |m| <= M,
//! ```
//!
//! whose Gaussian decay in `m` makes adaptive truncation cheap: summation
//! stops once the next image pair contributes less than 1e-14 of the
//! running sum, and the first omitted pair (inflated by a geometric tail
//! factor) is reported as the truncation error.
//!
//! A distributed boundary flux `g(y1, y2, s)` produces the field
//! `u0 = int G g dy1 dy2 ds`; `boundary_convolution` evaluates it by
//! composite trapezoid quadrature directly on the caller's samples, never
//! resampling, so accuracy is governed by the supplied grid.

use alloc::vec::Vec;

use crate::model::{BoundaryImpulse, Geometry, MediumParams, SpaceTimePoint, Violation};

/// Adaptive image summation stops when a pair falls below this fraction
/// of the running sum.
const IMAGE_PAIR_RELATIVE_FLOOR: f64 = 1e-14;

/// Causal free-space kernel `K(x, t; y, s)`; exactly zero for `t <= s`.
pub fn free_space_kernel(p: SpaceTimePoint, y: [f64; 3], s: f64, medium: MediumParams) -> f64 {
    let dt = p.t - s;
    if dt <= 0.0 {
        return 0.0;
    }
    let d1 = p.x1 - y[0];
    let d2 = p.x2 - y[1];
    let d3 = p.x3 - y[2];
    let r2 = d1 * d1 + d2 * d2 + d3 * d3;
    let four_gdt = 4.0 * medium.gamma * dt;
    // One exp of the combined exponent avoids 0 * inf at extreme arguments.
    let exponent =
        -medium.b * dt - r2 / four_gdt - 1.5 * libm::log(core::f64::consts::PI * four_gdt);
    libm::exp(exponent)
}

/// Reflecting half-space kernel for a source on the boundary plane:
/// `G = 2K` with `y3 = 0`. Even in `x3`, so its normal derivative
/// vanishes on the boundary.
pub fn halfspace_neumann_kernel(
    p: SpaceTimePoint,
    src: BoundaryImpulse,
    medium: MediumParams,
) -> f64 {
    2.0 * free_space_kernel(p, [src.y1, src.y2, 0.0], src.s, medium)
}

/// Truncated image sum for the slab, with its error report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlabKernel {
    pub value: f64,
    /// Estimate of the omitted tail: first omitted image pair inflated by
    /// the geometric factor observed between the last two pairs.
    pub truncation_error: f64,
    /// Largest image index `|m|` actually summed.
    pub images_used: u32,
}

/// Slab kernel with no-flux walls at `x3 = 0` and `x3 = L`: the image sum
/// over `y3 = 2mL`, truncated adaptively and capped at the geometry's
/// image budget. A half-space geometry is the infinite-width limit: the
/// plain reflecting kernel with zero truncation error.
pub fn slab_neumann_kernel(
    p: SpaceTimePoint,
    src: BoundaryImpulse,
    medium: MediumParams,
    geometry: Geometry,
) -> SlabKernel {
    let (width, cap) = match geometry {
        Geometry::HalfSpace => {
            return SlabKernel {
                value: halfspace_neumann_kernel(p, src, medium),
                truncation_error: 0.0,
                images_used: 0,
            };
        }
        Geometry::Slab { width, image_truncation } => (width, image_truncation),
    };
    if p.t <= src.s {
        return SlabKernel { value: 0.0, truncation_error: 0.0, images_used: 0 };
    }
    let image = |m: i64| {
        2.0 * free_space_kernel(p, [src.y1, src.y2, 2.0 * (m as f64) * width], src.s, medium)
    };
    let mut value = image(0);
    let mut last_pair = value;
    let mut images_used = 0u32;
    let omitted_pair;
    let mut m = 1u32;
    loop {
        let pair = image(i64::from(m)) + image(-i64::from(m));
        if m > cap || pair < IMAGE_PAIR_RELATIVE_FLOOR * value {
            omitted_pair = pair;
            break;
        }
        value += pair;
        last_pair = pair;
        images_used = m;
        m += 1;
    }
    // Image pairs decay faster than geometrically, so the observed ratio
    // bounds the omitted tail from above.
    let truncation_error = if omitted_pair > 0.0 && last_pair > 0.0 {
        let q = libm::fmin(omitted_pair / last_pair, 0.9);
        omitted_pair / (1.0 - q)
    } else {
        0.0
    };
    SlabKernel { value, truncation_error, images_used }
}

/// Boundary flux sampled on a tensor grid over `(y1, y2, s)`; `values` is
/// laid out row-major as `[(i1 * len(y2) + i2) * len(s) + is]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySourceSamples {
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

impl BoundarySourceSamples {
    pub fn value_at(&self, i1: usize, i2: usize, is_: usize) -> f64 {
        self.values[(i1 * self.y2.len() + i2) * self.s.len() + is_]
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (axis, field) in [(&self.y1, "y1"), (&self.y2, "y2"), (&self.s, "s")] {
            if axis.windows(2).any(|w| !(w[0] < w[1])) {
                out.push(Violation { field, constraint: "strictly increasing" });
            }
        }
        if self.values.len() != self.y1.len() * self.y2.len() * self.s.len() {
            out.push(Violation {
                field: "values",
                constraint: "length = len(y1) * len(y2) * len(s)",
            });
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            out.push(Violation { field: "values", constraint: "finite" });
        }
        out
    }
}

/// The convolved field and whether the sample grid could certify the
/// causal window: emission samples must reach the observation time,
/// otherwise late contributions are silently unknown.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvolutionResult {
    pub value: f64,
    pub coverage_warning: bool,
}

fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = Vec::new();
    w.resize(n, 0.0);
    if n < 2 {
        return w;
    }
    w[0] = 0.5 * (xs[1] - xs[0]);
    w[n - 1] = 0.5 * (xs[n - 1] - xs[n - 2]);
    for i in 1..n - 1 {
        w[i] = 0.5 * (xs[i + 1] - xs[i - 1]);
    }
    w
}

/// Field of a distributed boundary flux: composite trapezoid quadrature
/// of the samples against the geometry's kernel. Causality is enforced by
/// the kernel itself, so acausal samples contribute nothing.
pub fn boundary_convolution(
    g: &BoundarySourceSamples,
    p: SpaceTimePoint,
    medium: MediumParams,
    geometry: Geometry,
) -> ConvolutionResult {
    let w1 = trapezoid_weights(&g.y1);
    let w2 = trapezoid_weights(&g.y2);
    let ws = trapezoid_weights(&g.s);
    let mut value = 0.0;
    for (i1, &a1) in g.y1.iter().enumerate() {
        for (i2, &a2) in g.y2.iter().enumerate() {
            for (is_, &s) in g.s.iter().enumerate() {
                let gv = g.value_at(i1, i2, is_);
                let weight = w1[i1] * w2[i2] * ws[is_] * gv;
                if weight == 0.0 {
                    continue;
                }
                let src = BoundaryImpulse { y1: a1, y2: a2, s };
                let kernel = match geometry {
                    Geometry::HalfSpace => halfspace_neumann_kernel(p, src, medium),
                    Geometry::Slab { .. } => slab_neumann_kernel(p, src, medium, geometry).value,
                };
                value += weight * kernel;
            }
        }
    }
    let s_end = g.s.last().copied().unwrap_or(f64::NEG_INFINITY);
    ConvolutionResult { value, coverage_warning: p.t > s_end }
}
