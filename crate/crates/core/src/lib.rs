//! Forward solver for the time-domain photon diffusion equation
//!
//! ```text
//! (d/dt - gamma Laplacian + b) u = 0          in the half space x3 > 0 (or a slab 0 < x3 < L),
//! gamma du/dnu + beta u = g                   on the boundary x3 = 0,
//! u = 0                                       at t = 0,
//! ```
//!
//! with `gamma` the diffusion coefficient (mm^2/ps), `b` the absorption rate
//! (1/ps), and `beta` the boundary impedance (mm/ps). The field produced by an
//! impulsive boundary source is computed three independent ways:
//!
//! - [`born`]: the Born series in `beta` around the Neumann (`beta = 0`)
//!   problem, every term in closed form via Beta-function constants and
//!   confluent hypergeometric profiles; converges for every `beta`.
//! - [`exact`]: the closed-form solution of the Robin problem, plus the
//!   extrapolated-boundary approximation it is traditionally replaced with.
//! - [`kernels`]: the free-space, half-space Neumann, and slab Neumann
//!   kernels, and quadrature of sampled boundary sources against them.
//!
//! Units are mm and ps throughout; there is no unit-conversion layer.
//!
//! The crate is `no_std` (with `alloc`): all floating-point primitives come
//! from `libm`, and the special functions in [`specfun`] are evaluated in
//! either `f64` or a double-double type with roughly 31 significant decimal
//! digits, switching automatically where the closed-form Born terms lose
//! digits to cancellation.

#![no_std]
#![deny(unsafe_code)]
// Domain checks are written `!(x > 0.0)` on purpose: a NaN parameter
// must register as a violation, and the negated comparison catches it
// where `x <= 0.0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod born;
pub mod exact;
pub mod kernels;
pub mod model;
pub mod quad;
pub mod specfun;
