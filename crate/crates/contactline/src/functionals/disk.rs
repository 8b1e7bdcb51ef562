//! Area integrals over the disk, in polar form with nested adaptive
//! quadrature.
//!
//! The functionals integrate fields with indicator factors — integrands
//! that jump across two interface curves and vanish outside a thin
//! symmetric-difference region. Equal-panel product rules stall on such
//! data, so both directions are handled by [`integrate_adaptive`]: rays
//! localize the radial crossings on their own, and the angular sweep is
//! seeded at the contact angles, where the profile kinks. Smooth
//! integrands converge in a handful of panels; jumps cost a logarithmic
//! stack around the feature.
//!
//! Error budgeting: the caller's relative tolerance is converted to an
//! absolute budget against a coarse estimate of the integral of |g|.
//! The radial integrals get a small slice of it so their noise stays
//! under the angular error estimator.

use crate::math::{vec2, Vec2};
use crate::numerics::{integrate_adaptive, integrate_panels};

/// Integral of `g` over the centered disk of the given radius.
///
/// `angle_seeds` mark polar angles where the angular profile is known
/// to be awkward (contact points of the interface curves involved).
/// Results are deterministic; a NaN from `g` poisons the value, which
/// callers turn into a domain error.
pub fn disk_integral(
    radius: f64,
    angle_seeds: &[f64],
    rel_tol: f64,
    g: impl Fn(Vec2) -> f64,
) -> f64 {
    let tau = std::f64::consts::TAU;
    // Coarse scale pass over |g| to anchor the absolute budget; the
    // floor keeps the tolerance meaningful for integrals near zero.
    let scale = integrate_panels(
        |th| {
            let d = vec2(th.cos(), th.sin());
            integrate_panels(|r| r * g(r * d).abs(), 0.0, radius, 4, 8)
        },
        0.0,
        tau,
        12,
        8,
    );
    let budget = rel_tol * if scale.is_finite() { scale.abs().max(1e-9) } else { 1.0 };
    let radial_tol = 0.05 * budget / tau;

    let seeds: Vec<f64> = angle_seeds.iter().map(|a| a.rem_euclid(tau)).collect();
    let profile = |th: f64| {
        let d = vec2(th.cos(), th.sin());
        integrate_adaptive(|r| r * g(r * d), 0.0, radius, &[], radial_tol).0
    };
    integrate_adaptive(profile, 0.0, tau, &seeds, 0.95 * budget).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_and_polynomial_integrals() {
        let pi = std::f64::consts::PI;
        assert_relative_eq!(disk_integral(1.0, &[], 1e-10, |_| 1.0), pi, epsilon = 1e-9);
        // x^2 over the unit disk = pi/4
        assert_relative_eq!(
            disk_integral(1.0, &[], 1e-10, |p| p.x * p.x),
            pi / 4.0,
            epsilon = 1e-9
        );
        // scaling: radius 2, integrand |p|^2 -> 2 pi 2^4 / 4
        assert_relative_eq!(
            disk_integral(2.0, &[], 1e-10, |p| p.norm_squared()),
            8.0 * pi,
            epsilon = 1e-8
        );
    }

    #[test]
    fn half_plane_indicator_with_seeded_contacts() {
        // indicator of the right half-disk: jumps along the vertical
        // diameter; the contact angles are the seeds
        let pi = std::f64::consts::PI;
        let v = disk_integral(
            1.0,
            &[pi / 2.0, -pi / 2.0],
            1e-9,
            |p| if p.x > 0.0 { 1.0 } else { 0.0 },
        );
        assert_relative_eq!(v, pi / 2.0, epsilon = 1e-8);
    }

    #[test]
    fn thin_wedge_between_two_diameters() {
        // symmetric-difference style integrand: 1 between the diameter
        // at angle 0 and the one rotated by eps, on both sides
        let eps = 0.05;
        let inside = move |p: Vec2| {
            let a1 = p.y > 0.0;
            let rot = p.y * eps.cos() - p.x * eps.sin() > 0.0;
            if a1 != rot {
                1.0
            } else {
                0.0
            }
        };
        let v = disk_integral(1.0, &[0.0, eps, std::f64::consts::PI], 1e-8, inside);
        assert_relative_eq!(v, eps, epsilon = 1e-7);
    }

    #[test]
    fn nan_poisons_the_result() {
        let v = disk_integral(1.0, &[], 1e-6, |p| {
            if p.x > 0.3 {
                f64::NAN
            } else {
                1.0
            }
        });
        assert!(v.is_nan());
    }
}
