//! Randomized structural checks: invariances and identities that must hold
//! for every admissible input, not just the hand-picked regression points.

use num_complex::Complex64;
use proptest::prelude::*;

use abwave::diffraction::diffraction_coefficient;
use abwave::mode_sum::{diffraction_series_closed, Flux, PolarPoint};
use abwave::special_fn::{bessel_j, BesselOrder};
use abwave::AccuracyBudget;

fn flux() -> impl Strategy<Value = f64> {
    0.05f64..0.95
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The coefficient depends on the two angles only through their
    /// difference: rotating the whole configuration leaves it unchanged.
    #[test]
    fn coefficient_is_rotation_invariant(
        alpha in flux(),
        r1 in 0.3f64..3.0,
        r2 in 0.3f64..3.0,
        dtheta in -2.8f64..2.8,
        shift in -10.0f64..10.0,
    ) {
        let alpha = Flux::new(alpha).unwrap();
        let base = diffraction_coefficient(
            alpha,
            &PolarPoint::new(r1, 0.5 * dtheta).unwrap(),
            &PolarPoint::new(r2, -0.5 * dtheta).unwrap(),
        ).unwrap();
        let rotated = diffraction_coefficient(
            alpha,
            &PolarPoint::new(r1, 0.5 * dtheta + shift).unwrap(),
            &PolarPoint::new(r2, -0.5 * dtheta + shift).unwrap(),
        ).unwrap();
        prop_assert!((base - rotated).norm() <= 1e-12 * base.norm());
    }

    /// Swapping the two points conjugates the coefficient.
    #[test]
    fn coefficient_conjugates_under_point_swap(
        alpha in flux(),
        r1 in 0.3f64..3.0,
        r2 in 0.3f64..3.0,
        th1 in -3.0f64..3.0,
        dtheta in 0.2f64..2.8,
    ) {
        let alpha = Flux::new(alpha).unwrap();
        let q1 = PolarPoint::new(r1, th1).unwrap();
        let q2 = PolarPoint::new(r2, th1 - dtheta).unwrap();
        let fwd = diffraction_coefficient(alpha, &q1, &q2).unwrap();
        let rev = diffraction_coefficient(alpha, &q2, &q1).unwrap();
        prop_assert!((fwd - rev.conj()).norm() <= 1e-12 * fwd.norm());
    }

    /// The summed angular series relates the fluxes alpha and 1 - alpha by
    /// reflecting the angle: S(1 - alpha, dtheta) = conj(S(alpha, -dtheta)).
    #[test]
    fn series_flux_reflection(alpha in flux(), dtheta in -2.8f64..2.8) {
        let a = diffraction_series_closed(Flux::new(alpha).unwrap(), dtheta).unwrap();
        let b = diffraction_series_closed(Flux::new(1.0 - alpha).unwrap(), -dtheta).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    /// Three-term recurrence J_{nu-1}(x) + J_{nu+1}(x) = (2 nu / x) J_nu(x).
    #[test]
    fn bessel_three_term_recurrence(nu in 1.0f64..6.0, x in 0.5f64..20.0) {
        let budget = AccuracyBudget::default();
        let j = |order: f64| bessel_j(BesselOrder::new(order).unwrap(), x, &budget).unwrap();
        let lhs = j(nu - 1.0) + j(nu + 1.0);
        let rhs = 2.0 * nu / x * j(nu);
        // The recurrence cancels severely for x >> nu, so compare against
        // the size of the terms rather than the (possibly tiny) result.
        let scale = j(nu - 1.0).abs() + j(nu + 1.0).abs() + 1e-300;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale.max(1.0));
    }

    /// The series value is a negative real multiple of e^{-i dtheta / 2}.
    #[test]
    fn series_phase_matches_half_angle(alpha in flux(), dtheta in -2.8f64..2.8) {
        let s = diffraction_series_closed(Flux::new(alpha).unwrap(), dtheta).unwrap();
        let rotated = s * Complex64::from_polar(1.0, 0.5 * dtheta);
        prop_assert!(rotated.im.abs() <= 1e-12 * s.norm());
        prop_assert!(rotated.re < 0.0);
    }
}
