//! Evolving-interface presets.
//!
//! Every analytic family below parametrizes an open curve whose
//! endpoints ride on the unit circle, with the frame convention of
//! [`ParamCurve`]: n points into the positive phase. Two of them are
//! exact transports of a diameter under the velocity presets —
//! `RotatingDiameter` under rigid rotation and `ShearedDiameter` under
//! the differential rotation with the same coefficients — which makes
//! them exact strong solutions for the transport checks.

use crate::geometry::curve::{curve_frames, ParamCurve};
use crate::geometry::spline::CubicSpline;
use crate::math::{rot90, rotation, vec2, Vec2};
use crate::numerics::integrate_panels;

#[derive(Debug, Clone)]
pub enum InterfaceFamily {
    /// Diameter of the unit disk at angle theta0 + omega t; the positive
    /// phase lies on the side the rotated normal points to (for a
    /// vertical diameter, theta0 = pi/2, that is the right half-disk).
    RotatingDiameter { theta0: f64, omega: f64 },
    /// Exact transport of the theta0-diameter under the differential
    /// rotation with angular rate g(r) = omega (1 + beta (2 r^2 - r^4)):
    /// the point at signed radius rho sits at angle theta0 + t g(rho).
    ShearedDiameter { theta0: f64, omega: f64, beta: f64 },
    /// Circular arc of the given radius meeting the unit circle at right
    /// angles, rotating rigidly at rate omega about the origin. The
    /// positive phase is the lens between the arc and the boundary.
    OrthogonalArc { radius: f64, axis_angle: f64, omega: f64 },
    /// Straight vertical chord x = offset. For offset != 0 it violates
    /// the right-angle contact condition; kept as a rejection fixture.
    Chord { offset: f64 },
    /// Spline through marker points (a single time slice, e.g. produced
    /// by the transport integrator).
    Sampled { spline: CubicSpline },
}

fn dir(a: f64) -> Vec2 {
    vec2(a.cos(), a.sin())
}

impl InterfaceFamily {
    /// Angular rate of the sheared diameter at signed radius rho (an even
    /// polynomial, so both half-diameters shear consistently).
    fn shear_rate(omega: f64, beta: f64, rho: f64) -> (f64, f64, f64) {
        let r2 = rho * rho;
        let g = omega * (1.0 + beta * (2.0 * r2 - r2 * r2));
        let dg = 4.0 * omega * beta * rho * (1.0 - r2);
        let ddg = 4.0 * omega * beta * (1.0 - 3.0 * r2);
        (g, dg, ddg)
    }

    fn arc_geometry(radius: f64) -> (f64, f64) {
        // center distance and angular half-span of an arc orthogonal to
        // the unit circle
        let q = (1.0 + radius * radius).sqrt();
        (q, f64::atan2(1.0, radius))
    }

    /// Curve length at time t.
    pub fn arc_length(&self, t: f64) -> f64 {
        let (a, b) = self.domain();
        integrate_panels(|rho| self.d_rho(rho, t).norm(), a, b, 64, 8)
    }

    /// Curvature at a parameter (sign per the frame convention).
    pub fn curvature_at(&self, rho: f64, t: f64) -> f64 {
        curve_frames(self, rho, t).2
    }

    /// Which phase the point is in at time t: +1 on the side the normal
    /// points into, -1 on the other, 0 exactly on the curve.
    ///
    /// Unlike the signed-distance chart, which is only certified on a
    /// band, this is a total function — the analytic presets all carry a
    /// global level set (the sheared diameter by unwinding the angular
    /// flow, the arc through its own circle). Sampled slices fall back to
    /// the side of the nearest marker's normal, exact within the tubular
    /// band and merely continuous beyond it.
    pub fn phase_side(&self, p: Vec2, t: f64) -> f64 {
        match *self {
            InterfaceFamily::RotatingDiameter { theta0, omega } => {
                let th = theta0 + omega * t;
                (p.x * th.sin() - p.y * th.cos()).signum()
            }
            InterfaceFamily::ShearedDiameter { theta0, omega, beta } => {
                let (g, _, _) = Self::shear_rate(omega, beta, p.norm());
                let th = theta0 + t * g;
                (p.x * th.sin() - p.y * th.cos()).signum()
            }
            InterfaceFamily::OrthogonalArc { radius, axis_angle, omega } => {
                let (q, _) = Self::arc_geometry(radius);
                let center = rotation(axis_angle + omega * t) * vec2(q, 0.0);
                (radius - (p - center).norm()).signum()
            }
            InterfaceFamily::Chord { offset } => (p.x - offset).signum(),
            InterfaceFamily::Sampled { .. } => {
                let (a, b) = self.domain();
                let mut best = (f64::INFINITY, a);
                for i in 0..=256 {
                    let rho = a + (b - a) * i as f64 / 256.0;
                    let d = (self.point(rho, t) - p).norm_squared();
                    if d < best.0 {
                        best = (d, rho);
                    }
                }
                let (n, _, _, _) = curve_frames(self, best.1, t);
                (p - self.point(best.1, t)).dot(&n).signum()
            }
        }
    }
}

impl ParamCurve for InterfaceFamily {
    fn domain(&self) -> (f64, f64) {
        match self {
            InterfaceFamily::OrthogonalArc { radius, .. } => {
                let (_, psi0) = Self::arc_geometry(*radius);
                (-psi0, psi0)
            }
            InterfaceFamily::Sampled { spline } => spline.domain(),
            _ => (-1.0, 1.0),
        }
    }

    fn point(&self, rho: f64, t: f64) -> Vec2 {
        match *self {
            InterfaceFamily::RotatingDiameter { theta0, omega } => rho * dir(theta0 + omega * t),
            InterfaceFamily::ShearedDiameter { theta0, omega, beta } => {
                let (g, _, _) = Self::shear_rate(omega, beta, rho);
                rho * dir(theta0 + t * g)
            }
            InterfaceFamily::OrthogonalArc { radius, axis_angle, omega } => {
                let (q, _) = Self::arc_geometry(radius);
                rotation(axis_angle + omega * t)
                    * (vec2(q, 0.0) + radius * vec2(-rho.cos(), rho.sin()))
            }
            InterfaceFamily::Chord { offset } => {
                vec2(offset, rho * (1.0 - offset * offset).sqrt())
            }
            InterfaceFamily::Sampled { ref spline } => spline.eval(rho),
        }
    }

    fn d_rho(&self, rho: f64, t: f64) -> Vec2 {
        match *self {
            InterfaceFamily::RotatingDiameter { theta0, omega } => dir(theta0 + omega * t),
            InterfaceFamily::ShearedDiameter { theta0, omega, beta } => {
                let (g, dg, _) = Self::shear_rate(omega, beta, rho);
                let d = dir(theta0 + t * g);
                d + rho * t * dg * rot90(d)
            }
            InterfaceFamily::OrthogonalArc { radius, axis_angle, omega } => {
                rotation(axis_angle + omega * t) * (radius * vec2(rho.sin(), rho.cos()))
            }
            InterfaceFamily::Chord { offset } => vec2(0.0, (1.0 - offset * offset).sqrt()),
            InterfaceFamily::Sampled { ref spline } => spline.d1(rho),
        }
    }

    fn d_rho_rho(&self, rho: f64, t: f64) -> Vec2 {
        match *self {
            InterfaceFamily::RotatingDiameter { .. } | InterfaceFamily::Chord { .. } => {
                Vec2::zeros()
            }
            InterfaceFamily::ShearedDiameter { theta0, omega, beta } => {
                let (g, dg, ddg) = Self::shear_rate(omega, beta, rho);
                let d = dir(theta0 + t * g);
                let e = rot90(d);
                (2.0 * t * dg + rho * t * ddg) * e - rho * (t * dg) * (t * dg) * d
            }
            InterfaceFamily::OrthogonalArc { radius, axis_angle, omega } => {
                rotation(axis_angle + omega * t) * (radius * vec2(rho.cos(), -rho.sin()))
            }
            InterfaceFamily::Sampled { ref spline } => spline.d2(rho),
        }
    }

    fn d_t(&self, rho: f64, t: f64) -> Vec2 {
        match *self {
            InterfaceFamily::RotatingDiameter { theta0, omega } => {
                rho * omega * rot90(dir(theta0 + omega * t))
            }
            InterfaceFamily::ShearedDiameter { theta0, omega, beta } => {
                let (g, _, _) = Self::shear_rate(omega, beta, rho);
                rho * g * rot90(dir(theta0 + t * g))
            }
            InterfaceFamily::OrthogonalArc { omega, .. } => omega * rot90(self.point(rho, t)),
            InterfaceFamily::Chord { .. } | InterfaceFamily::Sampled { .. } => Vec2::zeros(),
        }
    }

    fn d_t_rho(&self, rho: f64, t: f64) -> Vec2 {
        match *self {
            InterfaceFamily::RotatingDiameter { theta0, omega } => {
                omega * rot90(dir(theta0 + omega * t))
            }
            InterfaceFamily::ShearedDiameter { theta0, omega, beta } => {
                let (g, dg, _) = Self::shear_rate(omega, beta, rho);
                let d = dir(theta0 + t * g);
                (g + rho * dg) * rot90(d) - rho * g * t * dg * d
            }
            InterfaceFamily::OrthogonalArc { omega, .. } => omega * rot90(self.d_rho(rho, t)),
            InterfaceFamily::Chord { .. } | InterfaceFamily::Sampled { .. } => Vec2::zeros(),
        }
    }

    fn nearest_seed(&self, p: Vec2, t: f64) -> Option<f64> {
        match *self {
            InterfaceFamily::RotatingDiameter { theta0, omega } => {
                Some(p.dot(&dir(theta0 + omega * t)))
            }
            InterfaceFamily::Chord { offset } => {
                Some(p.y / (1.0 - offset * offset).sqrt())
            }
            InterfaceFamily::OrthogonalArc { radius, axis_angle, omega } => {
                let (q, _) = Self::arc_geometry(radius);
                let u = rotation(-(axis_angle + omega * t)) * p - vec2(q, 0.0);
                Some(f64::atan2(u.y, -u.x))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{chart_jet, frame_time_derivative};
    use approx::assert_relative_eq;

    #[test]
    fn vertical_diameter_chart_frozen_values() {
        let f = InterfaceFamily::RotatingDiameter { theta0: std::f64::consts::FRAC_PI_2, omega: 1.0 };
        let c = chart_jet(&f, vec2(0.1, 0.0), 0.0, 1.0).unwrap();
        assert_relative_eq!(c.s.v, 0.1, epsilon = 1e-14);
        assert_relative_eq!(c.p.v.norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(c.n.v.x, 1.0, epsilon = 1e-14);
        assert_relative_eq!(c.n.v.y, 0.0, epsilon = 1e-14);
        assert_relative_eq!(c.tau.v.y, 1.0, epsilon = 1e-14);
        assert_relative_eq!(c.h, 0.0);
        // on the interface the chart is the identity
        let on = chart_jet(&f, vec2(0.0, 0.35), 0.0, 1.0).unwrap();
        assert_relative_eq!(on.s.v, 0.0, epsilon = 1e-14);
        assert_relative_eq!((on.p.v - vec2(0.0, 0.35)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rotating_diameter_time_jets_are_exact() {
        // s(x, t) = x . n(t) for the rotating diameter; check dt s and
        // dt (n o P) against the analytic rotation
        let om = 0.7;
        let f = InterfaceFamily::RotatingDiameter { theta0: 0.4, omega: om };
        let p = vec2(0.3, -0.2);
        let t = 0.55;
        let c = chart_jet(&f, p, t, 1.0).unwrap();
        let h = 1e-6;
        let cp = chart_jet(&f, p, t + h, 1.0).unwrap();
        let cm = chart_jet(&f, p, t - h, 1.0).unwrap();
        assert_relative_eq!(c.s.dt, (cp.s.v - cm.s.v) / (2.0 * h), epsilon = 1e-8);
        let fd = (cp.n.v - cm.n.v) / (2.0 * h);
        assert_relative_eq!(c.n.dt.x, fd.x, epsilon = 1e-8);
        assert_relative_eq!(c.n.dt.y, fd.y, epsilon = 1e-8);
        // the normal rotates with the diameter: dt n = omega tau
        assert_relative_eq!((c.n.dt - om * c.tau.v).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sheared_diameter_matches_the_flow_of_the_plain_diameter() {
        use crate::velocity::VelocityField;
        let (om, be) = (0.9, 0.5);
        let f = InterfaceFamily::ShearedDiameter { theta0: 1.1, omega: om, beta: be };
        let v = VelocityField::RadialShear { omega: om, beta: be };
        let t = 0.8;
        for &rho in &[-1.0, -0.6, -0.2, 0.3, 0.77, 1.0] {
            let from_flow = v.flow(InterfaceFamily::RotatingDiameter { theta0: 1.1, omega: 0.0 }
                .point(rho, 0.0), t);
            let direct = f.point(rho, t);
            assert_relative_eq!((from_flow - direct).norm(), 0.0, epsilon = 1e-13);
            // transport consistency: the family's time derivative is the
            // velocity at the point
            let vel = v.eval(direct, t);
            assert_relative_eq!((f.d_t(rho, t) - vel).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sheared_diameter_partials_match_finite_differences() {
        let f = InterfaceFamily::ShearedDiameter { theta0: 0.3, omega: 1.2, beta: -0.6 };
        let (rho, t, h) = (0.47, 0.9, 1e-6);
        let fd_rho = (f.point(rho + h, t) - f.point(rho - h, t)) / (2.0 * h);
        assert_relative_eq!((fd_rho - f.d_rho(rho, t)).norm(), 0.0, epsilon = 1e-8);
        let fd_rho2 = (f.d_rho(rho + h, t) - f.d_rho(rho - h, t)) / (2.0 * h);
        assert_relative_eq!((fd_rho2 - f.d_rho_rho(rho, t)).norm(), 0.0, epsilon = 1e-8);
        let fd_t = (f.point(rho, t + h) - f.point(rho, t - h)) / (2.0 * h);
        assert_relative_eq!((fd_t - f.d_t(rho, t)).norm(), 0.0, epsilon = 1e-8);
        let fd_t_rho = (f.d_rho(rho, t + h) - f.d_rho(rho, t - h)) / (2.0 * h);
        assert_relative_eq!((fd_t_rho - f.d_t_rho(rho, t)).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn orthogonal_arc_geometry_frozen_values() {
        let f = InterfaceFamily::OrthogonalArc { radius: 0.75, axis_angle: 0.0, omega: 0.0 };
        let (a, b) = f.domain();
        // endpoints on the unit circle at (0.8, -0.6) and (0.8, 0.6)
        assert_relative_eq!(f.point(a, 0.0).x, 0.8, epsilon = 1e-14);
        assert_relative_eq!(f.point(a, 0.0).y, -0.6, epsilon = 1e-14);
        assert_relative_eq!(f.point(b, 0.0).y, 0.6, epsilon = 1e-14);
        assert_relative_eq!(f.point(b, 0.0).norm(), 1.0, epsilon = 1e-14);
        // curvature +1/R everywhere (normal toward the arc center)
        for &rho in &[a, 0.0, 0.3 * b, b] {
            assert_relative_eq!(f.curvature_at(rho, 0.0), 1.0 / 0.75, epsilon = 1e-12);
        }
        // endpoint tangents are radial: right-angle contact
        let tan = f.d_rho(b, 0.0);
        let c = f.point(b, 0.0);
        assert_relative_eq!(tan.x * c.y - tan.y * c.x, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn arc_normal_points_into_the_lens() {
        let f = InterfaceFamily::OrthogonalArc { radius: 0.75, axis_angle: 0.0, omega: 0.3 };
        let c = chart_jet(&f, vec2(0.6, 0.0), 0.0, 0.7).unwrap();
        // nearest arc point is (0.5, 0); the lens (positive side) is to
        // the right, toward the arc center (1.25, 0)
        assert_relative_eq!(c.p.v.x, 0.5, epsilon = 1e-13);
        assert_relative_eq!(c.n.v.x, 1.0, epsilon = 1e-13);
        assert_relative_eq!(c.s.v, 0.1, epsilon = 1e-13);
        assert_relative_eq!(c.h, 4.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn frame_time_derivative_matches_finite_differences() {
        let f = InterfaceFamily::ShearedDiameter { theta0: 0.2, omega: 0.8, beta: 0.4 };
        let (rho, t, h) = (0.63, 0.5, 1e-6);
        let (dn, dtau) = frame_time_derivative(&f, rho, t);
        let np = curve_frames(&f, rho, t + h);
        let nm = curve_frames(&f, rho, t - h);
        let fd_n = (np.0 - nm.0) / (2.0 * h);
        let fd_tau = (np.1 - nm.1) / (2.0 * h);
        assert_relative_eq!((dn - fd_n).norm(), 0.0, epsilon = 1e-7);
        assert_relative_eq!((dtau - fd_tau).norm(), 0.0, epsilon = 1e-7);
    }

    #[test]
    fn diameter_length_is_two() {
        let f = InterfaceFamily::RotatingDiameter { theta0: 0.9, omega: 2.0 };
        assert_relative_eq!(f.arc_length(0.4), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn phase_side_agrees_with_the_chart_sign_inside_the_band() {
        let cases: [(InterfaceFamily, f64, f64); 3] = [
            (InterfaceFamily::RotatingDiameter { theta0: 0.7, omega: 1.3 }, 0.6, 0.9),
            (InterfaceFamily::ShearedDiameter { theta0: 1.1, omega: 0.8, beta: 0.45 }, 0.8, 0.5),
            (InterfaceFamily::OrthogonalArc { radius: 0.75, axis_angle: 0.3, omega: 0.5 }, 0.4, 0.6),
        ];
        for (f, t, band) in cases {
            let mut checked = 0;
            for i in 0..15 {
                for j in 0..15 {
                    let p = vec2(-0.9 + 1.8 * i as f64 / 14.0, -0.9 + 1.8 * j as f64 / 14.0);
                    let Ok(ch) = chart_jet(&f, p, t, band) else { continue };
                    if ch.s.v.abs() < 1e-12 || ch.extended {
                        continue;
                    }
                    assert_eq!(f.phase_side(p, t), ch.s.v.signum(), "at ({}, {})", p.x, p.y);
                    checked += 1;
                }
            }
            assert!(checked > 40, "grid only produced {checked} chart hits");
        }
    }

    #[test]
    fn phase_side_far_from_the_interface() {
        // vertical diameter: the normal points into the right half-disk
        let f = InterfaceFamily::RotatingDiameter {
            theta0: std::f64::consts::FRAC_PI_2,
            omega: 0.0,
        };
        assert_eq!(f.phase_side(vec2(0.5, 0.0), 0.0), 1.0);
        assert_eq!(f.phase_side(vec2(-0.5, 0.3), 0.0), -1.0);
        // the positive phase of the arc is the lens; the disk center is
        // on the far side of the arc's own circle
        let arc = InterfaceFamily::OrthogonalArc { radius: 0.75, axis_angle: 0.0, omega: 0.0 };
        assert_eq!(arc.phase_side(vec2(0.0, 0.0), 0.0), -1.0);
        assert_eq!(arc.phase_side(vec2(0.9, 0.0), 0.0), 1.0);
    }
}
