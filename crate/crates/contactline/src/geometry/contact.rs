//! Contact points: where the interface meets the boundary circle.
//!
//! Each contact carries the pair of orthonormal frames (boundary and
//! interface), locally re-oriented tangents anchored by
//! tau_int = -n_bd and tau_bd = n_int at the contact, the six unit
//! directions spanning the wedge decomposition of the surrounding ball,
//! and the trajectory data (velocity of the contact, time derivatives of
//! frames and curvatures) that the contact-adapted calibration blocks
//! consume.
//!
//! Wedge layout around a contact, in polar coordinates phi measured from
//! n_bd (pointing into the domain) toward the orthonormalized interface
//! normal: the interface cone occupies |phi| <= 30 degrees, the two
//! interpolation (blend) wedges 30..60 degrees on either side, and the
//! boundary wedges 60..120 degrees; anything beyond folds into the
//! nearest boundary wedge (those directions exit the domain).

use crate::error::Error;
use crate::geometry::boundary::DomainBoundary;
use crate::geometry::curve::{chart_jet, curve_frames, frame_time_derivative, ParamCurve};
use crate::geometry::families::InterfaceFamily;
use crate::math::{outer, Mat2, Vec2};
use crate::numerics::d1_central4;
use crate::velocity::VelocityField;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

const SQ3H: f64 = 0.866_025_403_784_438_6; // sqrt(3)/2

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wedge {
    /// Cone around the interface direction (opening angle 60 degrees).
    Interface,
    /// Interpolation wedge between interface and boundary cones, on the
    /// positive-phase side.
    BlendPlus,
    /// Same on the negative-phase side.
    BlendMinus,
    /// Cone hugging the boundary on the positive-phase side.
    BoundaryPlus,
    BoundaryMinus,
    /// Farther than the contact ball radius.
    OutsideBall,
}

impl Wedge {
    pub fn is_blend(self) -> bool {
        matches!(self, Wedge::BlendPlus | Wedge::BlendMinus)
    }
    pub fn is_boundary(self) -> bool {
        matches!(self, Wedge::BoundaryPlus | Wedge::BoundaryMinus)
    }
}

/// Frames, wedge directions and trajectory data of one contact point.
#[derive(Debug, Clone)]
pub struct ContactFrame {
    pub t: f64,
    /// Contact position on the boundary circle.
    pub c: Vec2,
    /// Velocity of the contact point along the boundary.
    pub dc_dt: Vec2,
    /// Inward boundary normal at c.
    pub n_bd: Vec2,
    /// Boundary tangent at c, oriented so that tau_bd = n_int.
    pub tau_bd: Vec2,
    /// Interface normal at c (points into the positive phase).
    pub n_int: Vec2,
    /// Interface tangent at c, oriented so that tau_int = -n_bd.
    pub tau_int: Vec2,
    /// n_int orthonormalized against n_bd; spans the wedge directions.
    pub n_axis: Vec2,
    /// tau_int = sign_tau_int * rot90(n_int); the sign re-orients the
    /// global chart tangent to the anchored one near this contact.
    pub sign_tau_int: f64,
    pub sign_tau_bd: f64,
    /// d/dt of n_bd(c(t)) along the contact trajectory.
    pub n_bd_dt: Vec2,
    /// d/dt of n_int(c(t), t) along the contact trajectory.
    pub n_int_dt: Vec2,
    pub n_axis_dt: Vec2,
    /// Boundary curvature at c (1/R for the circle) and its rate.
    pub h_bd: f64,
    pub h_bd_dt: f64,
    /// Interface curvature at the contact and its rate along the
    /// trajectory.
    pub h_int: f64,
    pub h_int_dt: f64,
    /// Edges of the interface cone: [minus side, plus side].
    pub x_int: [Vec2; 2],
    /// Outer edges of the interpolation wedges: [minus, plus].
    pub x_blend: [Vec2; 2],
    /// Outer edges of the boundary wedges: [minus, plus].
    pub x_bd: [Vec2; 2],
    /// Contact ball radius (wedge decomposition is certified inside).
    pub r_c: f64,
    /// Radius on which the blended calibration stays safely normalizable.
    pub r_hat_c: f64,
    /// Which end of the parameter interval this contact is (0 = lower).
    pub endpoint: usize,
    pub rho_end: f64,
    /// Residual of the frame anchoring relations at c.
    pub anchor_residual: f64,
    /// Residual of the curvature-transport relation
    /// (tau_int . grad)(n_int . v) = H_bd (n_int . v) at c; None when no
    /// velocity was supplied. Vanishes for exactly transported families.
    pub transport_residual: Option<f64>,
}

impl ContactFrame {
    pub fn classify(&self, p: Vec2) -> Wedge {
        let d = p - self.c;
        let r = d.norm();
        if r > self.r_c {
            return Wedge::OutsideBall;
        }
        if r == 0.0 {
            return Wedge::Interface;
        }
        let phi = f64::atan2(d.dot(&self.n_axis), d.dot(&self.n_bd));
        let a = phi.abs();
        if a <= FRAC_PI_6 {
            Wedge::Interface
        } else if a <= FRAC_PI_3 {
            if phi > 0.0 {
                Wedge::BlendPlus
            } else {
                Wedge::BlendMinus
            }
        } else if phi > 0.0 {
            Wedge::BoundaryPlus
        } else {
            Wedge::BoundaryMinus
        }
    }

    /// Time derivatives of the interface-cone edges (same coefficients as
    /// the edges themselves, applied to the frame derivatives).
    pub fn x_int_dt(&self, side: usize) -> Vec2 {
        let sgn = if side == 0 { -1.0 } else { 1.0 };
        SQ3H * self.n_bd_dt + sgn * 0.5 * self.n_axis_dt
    }

    pub fn x_blend_dt(&self, side: usize) -> Vec2 {
        let sgn = if side == 0 { -1.0 } else { 1.0 };
        0.5 * self.n_bd_dt + sgn * SQ3H * self.n_axis_dt
    }
}

/// Locate the contact points of the interface at time t and assemble
/// their frames.
///
/// `velocity` feeds the curvature-transport residual; pass None for
/// purely geometric queries. `angle_tol_deg` is the largest tolerated
/// deviation of the contact angle from 90 degrees.
pub fn locate_contact_points(
    boundary: &DomainBoundary,
    family: &InterfaceFamily,
    t: f64,
    velocity: Option<&VelocityField>,
    angle_tol_deg: f64,
) -> Result<Vec<ContactFrame>, Error> {
    let (a, b) = family.domain();
    let mut frames = Vec::with_capacity(2);
    let positions = [family.point(a, t), family.point(b, t)];
    for (endpoint, &rho_end) in [a, b].iter().enumerate() {
        let c = positions[endpoint];
        let off = boundary.signed_dist(c).abs();
        if off > 1e-6 * boundary.radius {
            return Err(Error::FixtureInconsistent(format!(
                "interface endpoint ({}, {}) sits {off:.2e} away from the boundary circle",
                c.x, c.y
            )));
        }
        let bd = boundary.chart(c, boundary.radius)?;
        let (n_int, tau_raw, h_int, _q) = curve_frames(family, rho_end, t);

        let dot = n_int.dot(&bd.n.v);
        let dev_deg = dot.abs().min(1.0).asin().to_degrees();
        if dev_deg > angle_tol_deg {
            return Err(Error::AngleViolation {
                x: c.x,
                y: c.y,
                angle_deg: 90.0 - dev_deg,
                tol_deg: angle_tol_deg,
            });
        }

        // anchored tangents: tau_int = -n_bd, tau_bd = n_int, up to the
        // residual of the right-angle condition
        let sign_tau_int = if tau_raw.dot(&bd.n.v) <= 0.0 { 1.0 } else { -1.0 };
        let tau_int = sign_tau_int * tau_raw;
        let sign_tau_bd = if bd.tau.v.dot(&n_int) >= 0.0 { 1.0 } else { -1.0 };
        let tau_bd = sign_tau_bd * bd.tau.v;
        let anchor_residual = (tau_int + bd.n.v).norm().max((tau_bd - n_int).norm());

        // orthonormalize the interface normal against the boundary normal
        let w = n_int - dot * bd.n.v;
        let n_axis = w / w.norm();

        // trajectory data
        let dc_dt = family.d_t(rho_end, t);
        let n_bd_dt = bd.n.dx * dc_dt;
        let (fr_n_dt, _) = frame_time_derivative(family, rho_end, t);
        let n_int_dt = fr_n_dt;
        let n_bd_traj_dt = n_bd_dt;
        let w_dt = n_int_dt
            - (n_int_dt.dot(&bd.n.v) + n_int.dot(&n_bd_traj_dt)) * bd.n.v
            - dot * n_bd_traj_dt;
        let n_axis_dt = (Mat2::identity() - outer(n_axis, n_axis)) * w_dt / w.norm();

        let h_int_dt = d1_central4(|s| family.curvature_at(rho_end, s), t, 1e-4);

        let transport_residual = velocity.map(|v| {
            let ch = chart_jet(family, c, t, boundary.radius).expect("chart at the contact");
            let f = ch.n.dot(v.jet(c, t));
            tau_int.dot(&f.dx) - bd.h * f.v
        });

        let x_int = [SQ3H * bd.n.v - 0.5 * n_axis, SQ3H * bd.n.v + 0.5 * n_axis];
        let x_blend = [0.5 * bd.n.v - SQ3H * n_axis, 0.5 * bd.n.v + SQ3H * n_axis];
        let x_bd = [-0.5 * bd.n.v - SQ3H * n_axis, -0.5 * bd.n.v + SQ3H * n_axis];

        frames.push(ContactFrame {
            t,
            c,
            dc_dt,
            n_bd: bd.n.v,
            tau_bd,
            n_int,
            tau_int,
            n_axis,
            sign_tau_int,
            sign_tau_bd,
            n_bd_dt,
            n_int_dt,
            n_axis_dt,
            h_bd: bd.h,
            h_bd_dt: 0.0,
            h_int,
            h_int_dt,
            x_int,
            x_blend,
            x_bd,
            r_c: 0.0,
            r_hat_c: 0.0,
            endpoint,
            rho_end,
            anchor_residual,
            transport_residual,
        });
    }
    // provisional ball radii; the localization-radius search refines them
    let sep = (positions[0] - positions[1]).norm();
    for f in &mut frames {
        let mut r = (0.35 * boundary.radius).min(0.25 * sep);
        if f.h_int.abs() > 1e-9 {
            r = r.min(0.9 / f.h_int.abs());
        }
        f.r_c = r;
        f.r_hat_c = r;
    }
    Ok(frames)
}

/// Residual of the wedge opening-angle relations for a frame; exercised
/// by both the unit tests and the verification suite.
pub fn wedge_angle_residual(f: &ContactFrame) -> f64 {
    let half = 0.5;
    let mut worst: f64 = 0.0;
    worst = worst.max((f.x_bd[1].dot(&f.x_blend[1]) - half).abs());
    worst = worst.max((f.x_bd[0].dot(&f.x_blend[0]) - half).abs());
    worst = worst.max((f.x_int[0].dot(&f.x_int[1]) - half).abs());
    worst = worst.max((f.x_blend[1].dot(&f.x_int[1]) - SQ3H).abs());
    worst = worst.max((f.x_blend[0].dot(&f.x_int[0]) - SQ3H).abs());
    for x in f.x_int.iter().chain(f.x_blend.iter()).chain(f.x_bd.iter()) {
        worst = worst.max((x.norm() - 1.0).abs());
    }
    worst
}
