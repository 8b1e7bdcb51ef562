//! The container: a disk, with a closed-form signed-distance chart.

use crate::error::Error;
use crate::geometry::curve::{ChartJet, ParamCurve};
use crate::jet::{ScalarJet, VecJet};
use crate::math::{outer, rot90, Mat2, Vec2};
use serde::{Deserialize, Serialize};

/// Disk of the given radius centered at the origin. The signed distance
/// s(x) = R - |x| is positive inside, its gradient is the inward normal,
/// and the curvature seen from inside is 1/R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainBoundary {
    pub radius: f64,
}

impl DomainBoundary {
    pub fn unit() -> Self {
        DomainBoundary { radius: 1.0 }
    }

    pub fn signed_dist(&self, p: Vec2) -> f64 {
        self.radius - p.norm()
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.norm() <= self.radius
    }

    /// Closed-form chart. Defined away from the center (where the
    /// nearest-point projection is singular); the band guard is the same
    /// contract as for generic curves.
    pub fn chart(&self, p: Vec2, band: f64) -> Result<ChartJet, Error> {
        let r = p.norm();
        let s = self.radius - r;
        if s.abs() >= band || r < 1e-9 {
            return Err(Error::OutsideTubularBand { x: p.x, y: p.y, dist: s.abs(), band });
        }
        let n = -p / r;
        let tau = rot90(n);
        let tt = outer(tau, tau);
        let h = 1.0 / self.radius;
        let kappa = 1.0 / r;
        let j = Mat2::new(0.0, -1.0, 1.0, 0.0);
        let n_jet = VecJet { v: n, dx: -kappa * tt, dt: Vec2::zeros() };
        Ok(ChartJet {
            s: ScalarJet { v: s, dx: n, dt: 0.0 },
            p: VecJet { v: self.radius / r * p, dx: self.radius / r * tt, dt: Vec2::zeros() },
            n: n_jet,
            tau: VecJet { v: tau, dx: j * n_jet.dx, dt: Vec2::zeros() },
            h,
            kappa,
            rho: p.y.atan2(p.x),
            extended: false,
        })
    }

    /// Point on the circle at polar angle `a`.
    pub fn at_angle(&self, a: f64) -> Vec2 {
        self.radius * Vec2::new(a.cos(), a.sin())
    }
}

/// Counter-clockwise parametrization over one period; the frame is
/// flipped so the normal points inward.
impl ParamCurve for DomainBoundary {
    fn domain(&self) -> (f64, f64) {
        (0.0, std::f64::consts::TAU)
    }
    fn closed(&self) -> bool {
        true
    }
    fn orient(&self) -> f64 {
        -1.0
    }
    fn point(&self, rho: f64, _t: f64) -> Vec2 {
        self.radius * Vec2::new(rho.cos(), rho.sin())
    }
    fn d_rho(&self, rho: f64, _t: f64) -> Vec2 {
        self.radius * Vec2::new(-rho.sin(), rho.cos())
    }
    fn d_rho_rho(&self, rho: f64, _t: f64) -> Vec2 {
        -self.radius * Vec2::new(rho.cos(), rho.sin())
    }
    fn d_t(&self, _rho: f64, _t: f64) -> Vec2 {
        Vec2::zeros()
    }
    fn d_t_rho(&self, _rho: f64, _t: f64) -> Vec2 {
        Vec2::zeros()
    }
    fn nearest_seed(&self, p: Vec2, _t: f64) -> Option<f64> {
        Some(p.y.atan2(p.x).rem_euclid(std::f64::consts::TAU))
    }
}
