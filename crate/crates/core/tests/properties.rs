//! Randomized invariants with shrinking: structural facts that must hold
//! for every admissible input, not just at tabulated reference points.
//! The sign-alternation property is restricted to the resolvable region
//! `n zeta^2 <~ 250`; beyond it the terms underflow the supported
//! precision and are flushed to an (unsigned) zero by design.

use photondiff_core::born::{born_partial_sum, wn_closed, BornTermContext};
use photondiff_core::exact::exact_solution;
use photondiff_core::kernels::{free_space_kernel, halfspace_neumann_kernel, slab_neumann_kernel};
use photondiff_core::model::{
    BoundaryImpulse, Geometry, MediumParams, RobinCoefficient, SpaceTimePoint,
};
use proptest::prelude::*;

const BASE: MediumParams = MediumParams { gamma: 0.06, b: 0.001 };
const ORIGIN: BoundaryImpulse = BoundaryImpulse { y1: 0.0, y2: 0.0, s: 0.0 };

proptest! {
    #[test]
    fn kernels_vanish_before_the_source_fires(
        x1 in -40.0f64..40.0,
        x2 in -40.0f64..40.0,
        x3 in 0.0f64..60.0,
        s in 0.0f64..3000.0,
        lag in 0.0f64..2000.0,
        y1 in -20.0f64..20.0,
        y2 in -20.0f64..20.0,
    ) {
        let p = SpaceTimePoint { x1, x2, x3, t: s - lag };
        let src = BoundaryImpulse { y1, y2, s };
        let slab = Geometry::Slab { width: 60.0, image_truncation: 16 };
        prop_assert_eq!(free_space_kernel(p, [y1, y2, 5.0], s, BASE), 0.0);
        prop_assert_eq!(halfspace_neumann_kernel(p, src, BASE), 0.0);
        prop_assert_eq!(slab_neumann_kernel(p, src, BASE, slab).value, 0.0);
    }

    #[test]
    fn resolvable_terms_alternate_in_sign(
        n in 1u32..=69,
        z in 0.01f64..3.5,
        t in 200.0f64..4000.0,
        beta in 0.001f64..0.05,
    ) {
        let ctx = BornTermContext { medium: BASE, beta: RobinCoefficient { beta }, t0: 0.0 };
        let x3 = (z * 4.0 * BASE.gamma * t).sqrt();
        let lower = wn_closed(n, x3, t, &ctx);
        let upper = wn_closed(n + 1, x3, t, &ctx);
        prop_assert!(
            lower * upper < 0.0,
            "orders {} and {} at zeta^2 = {}: {:e}, {:e}",
            n, n + 1, z, lower, upper
        );
    }

    #[test]
    fn exact_field_never_exceeds_the_reflecting_kernel(
        x1 in -20.0f64..20.0,
        x2 in -20.0f64..20.0,
        x3 in 0.0f64..50.0,
        t in 1.0f64..5000.0,
        beta in 1e-4f64..1.5,
    ) {
        let p = SpaceTimePoint { x1, x2, x3, t };
        let exact = exact_solution(p, ORIGIN, BASE, RobinCoefficient { beta });
        // Deep in the tail the field underflows to an exact zero, so
        // nonnegativity is the sharp lower bound.
        prop_assert!(exact >= 0.0);
        prop_assert!(exact <= halfspace_neumann_kernel(p, ORIGIN, BASE));
    }

    #[test]
    fn zero_impedance_collapses_all_routes(
        x1 in -10.0f64..10.0,
        x2 in -10.0f64..10.0,
        x3 in 0.0f64..30.0,
        t in 1.0f64..5000.0,
    ) {
        let p = SpaceTimePoint { x1, x2, x3, t };
        let beta = RobinCoefficient { beta: 0.0 };
        let kernel = halfspace_neumann_kernel(p, ORIGIN, BASE);
        let exact = exact_solution(p, ORIGIN, BASE, beta);
        let series = born_partial_sum(6, p, ORIGIN, BASE, beta, 1e-2);
        if kernel == 0.0 {
            // Underflowed tail: every route must agree on the exact zero.
            prop_assert_eq!(exact, 0.0);
            prop_assert_eq!(series.partial_sums[6], 0.0);
        } else if kernel < f64::MIN_POSITIVE {
            // Subnormal tail: no relative precision is left, but all
            // routes must sit together below the normal floor.
            prop_assert!((exact - kernel).abs() <= f64::MIN_POSITIVE);
            prop_assert!((series.partial_sums[6] - kernel).abs() <= f64::MIN_POSITIVE);
        } else {
            // The routes assemble the Gaussian exponent E from
            // differently rounded pieces, so exp(-E) may disagree by
            // about E ulps between them.
            let exponent = BASE.b * t + (x1 * x1 + x2 * x2 + x3 * x3) / (4.0 * BASE.gamma * t);
            let tol = (exponent + 16.0) * 4.0e-16;
            prop_assert!(((exact - kernel) / kernel).abs() <= tol);
            prop_assert!(((series.partial_sums[6] - kernel) / kernel).abs() <= tol);
        }
    }
}
