//! One-dimensional cutoff and interpolation profiles.
//!
//! All profiles are piecewise polynomial with exact plateaus, C^2 across
//! the transition knots, and come with analytic first derivatives:
//!
//! * [`bump`]: even plateau bump, identically 1 on [-1/2, 1/2], identically
//!   0 outside (-1, 1);
//! * [`zeta`]: quadratic cutoff zeta(r) = (1 - r^2) * bump(r^2), so that
//!   1 - zeta(r) = r^2 exactly wherever r^2 <= 1/2;
//! * [`lambda_tilde`]: decreasing ramp, identically 1 on (-inf, 1/3],
//!   identically 0 on [2/3, inf);
//! * [`theta_bar`]: odd truncation of the identity, theta_bar(r) = r on
//!   [-1/2, 1/2], saturating at +-1 outside [-1, 1], slope within [0, 2].

/// Quintic smoothstep on [0, 1]: 6u^5 - 15u^4 + 10u^3 (C^2 at both ends).
fn smoothstep(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else if u >= 1.0 {
        (1.0, 0.0)
    } else {
        let v = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        let d = 30.0 * u * u * (1.0 - u) * (1.0 - u);
        (v, d)
    }
}

/// Plateau bump and its derivative.
pub fn bump(r: f64) -> (f64, f64) {
    let a = r.abs();
    if a <= 0.5 {
        (1.0, 0.0)
    } else if a >= 1.0 {
        (0.0, 0.0)
    } else {
        let (s, ds) = smoothstep(2.0 * (a - 0.5));
        // clamp: the quintic can land one ulp past 1.0 right before a knot
        ((1.0 - s).clamp(0.0, 1.0), -2.0 * ds * r.signum())
    }
}

/// Quadratic cutoff zeta(r) = (1 - r^2) bump(r^2) and its derivative.
///
/// zeta(0) = 1, zeta vanishes outside (-1, 1), and 1 - zeta(r) = r^2
/// exactly for r^2 <= 1/2 (the bump plateau).
pub fn zeta(r: f64) -> (f64, f64) {
    let (b, db) = bump(r * r);
    let v = (1.0 - r * r) * b;
    let d = -2.0 * r * b + (1.0 - r * r) * db * 2.0 * r;
    (v, d)
}

/// Decreasing interpolation ramp: 1 on (-inf, 1/3], 0 on [2/3, inf).
pub fn lambda_tilde(u: f64) -> (f64, f64) {
    if u <= 1.0 / 3.0 {
        (1.0, 0.0)
    } else if u >= 2.0 / 3.0 {
        (0.0, 0.0)
    } else {
        let (s, ds) = smoothstep(3.0 * u - 1.0);
        (1.0 - s, -3.0 * ds)
    }
}

/// Odd C^2 truncation of the identity with slope in [0, 2]:
/// theta_bar(r) = r for |r| <= 1/2 and theta_bar(r) = sign(r) for |r| >= 1.
///
/// The transition on [1/2, 1] is the quintic Hermite blend
/// H(u) = u + 4u^3 - 7u^4 + 3u^5 (H(0)=0, H(1)=1, H'(0)=1, H'(1)=0,
/// H''(0)=H''(1)=0), whose slope peaks at 1.4375.
pub fn theta_bar(r: f64) -> (f64, f64) {
    let a = r.abs();
    if a <= 0.5 {
        (r, 1.0)
    } else if a >= 1.0 {
        (r.signum(), 0.0)
    } else {
        let u = 2.0 * (a - 0.5);
        let h = u + u * u * u * (4.0 + u * (-7.0 + 3.0 * u));
        let dh = 1.0 + u * u * (12.0 + u * (-28.0 + 15.0 * u));
        (r.signum() * 0.5 * (1.0 + h), dh)
    }
}
