//! Prescribed transport velocities on the unit disk.
//!
//! All presets are steady, divergence-free, and tangential along the
//! boundary circle, so they transport admissible phase configurations to
//! admissible ones. They share the common form v(x) = g(|x|) x^perp with
//! an even polynomial angular rate g, which has two payoffs exploited by
//! the verification suites: the flow map is available in closed form
//! (every circle |x| = r rotates rigidly at rate g(r)), and interfaces
//! meeting the boundary at a right angle keep doing so exactly, because
//! g'(0) = g'(1) = 0 for every preset.

use crate::jet::VecJet;
use crate::math::{outer, rot90, rotation, Mat2, Vec2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VelocityField {
    /// v = 0 (static scenes).
    Zero,
    /// Rigid rotation about the origin: v = omega * x^perp.
    Rigid { omega: f64 },
    /// Differential rotation v = g(|x|) x^perp with
    /// g(r) = omega (1 + beta (2 r^2 - r^4)): rate omega at the center,
    /// omega (1 + beta) at the boundary, stationary endpoints of g.
    RadialShear { omega: f64, beta: f64 },
}

impl Default for VelocityField {
    fn default() -> Self {
        VelocityField::Zero
    }
}

impl VelocityField {
    fn coeffs(&self) -> (f64, f64) {
        match *self {
            VelocityField::Zero => (0.0, 0.0),
            VelocityField::Rigid { omega } => (omega, 0.0),
            VelocityField::RadialShear { omega, beta } => (omega, beta),
        }
    }

    pub fn is_zero(&self) -> bool {
        let (w, _) = self.coeffs();
        w == 0.0
    }

    /// Angular rate g(r) of the circle of radius r.
    pub fn angular_rate(&self, r: f64) -> f64 {
        let (w, b) = self.coeffs();
        let r2 = r * r;
        w * (1.0 + b * (2.0 * r2 - r2 * r2))
    }

    /// g'(r); vanishes at r = 0 and r = 1 for every preset.
    pub fn angular_rate_prime(&self, r: f64) -> f64 {
        let (w, b) = self.coeffs();
        4.0 * w * b * r * (1.0 - r * r)
    }

    pub fn eval(&self, x: Vec2, _t: f64) -> Vec2 {
        self.angular_rate(x.norm()) * rot90(x)
    }

    /// Spatial gradient; the fields are steady so the time slot is zero.
    pub fn grad(&self, x: Vec2, _t: f64) -> Mat2 {
        let (w, b) = self.coeffs();
        let r2 = x.norm_squared();
        let g = w * (1.0 + b * (2.0 * r2 - r2 * r2));
        // grad g = 4 w b (1 - r^2) x  (g as a polynomial in |x|^2)
        let dg = 4.0 * w * b * (1.0 - r2) * x;
        let j = Mat2::new(0.0, -1.0, 1.0, 0.0);
        outer(rot90(x), dg) + g * j
    }

    pub fn jet(&self, x: Vec2, t: f64) -> VecJet {
        VecJet { v: self.eval(x, t), dx: self.grad(x, t), dt: Vec2::zeros() }
    }

    /// Exact flow map over a time increment: rotate x by g(|x|) * dt.
    pub fn flow(&self, x: Vec2, dt: f64) -> Vec2 {
        rotation(self.angular_rate(x.norm()) * dt) * x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec2;
    use crate::numerics::{rng_from_seed, sample_unit_disk};
    use approx::assert_relative_eq;

    #[test]
    fn presets_are_divergence_free_and_boundary_tangential() {
        let fields = [
            VelocityField::Rigid { omega: 1.3 },
            VelocityField::RadialShear { omega: 0.7, beta: -0.4 },
        ];
        let mut rng = rng_from_seed(11);
        for f in fields {
            for _ in 0..300 {
                let x = sample_unit_disk(&mut rng);
                let g = f.grad(x, 0.0);
                assert!((g.m11 + g.m22).abs() < 1e-13, "divergence at {x:?}");
            }
            for k in 0..64 {
                let a = k as f64 * std::f64::consts::TAU / 64.0;
                let x = vec2(a.cos(), a.sin());
                assert!(f.eval(x, 0.0).dot(&x).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = VelocityField::RadialShear { omega: 1.1, beta: 0.6 };
        let h = 1e-6;
        let x = vec2(0.35, -0.52);
        let g = f.grad(x, 0.0);
        for j in 0..2 {
            let mut dx = Vec2::zeros();
            dx[j] = h;
            let col = (f.eval(x + dx, 0.0) - f.eval(x - dx, 0.0)) / (2.0 * h);
            assert_relative_eq!(g[(0, j)], col.x, epsilon = 1e-8);
            assert_relative_eq!(g[(1, j)], col.y, epsilon = 1e-8);
        }
    }

    #[test]
    fn flow_map_matches_time_stepping() {
        // Cross-check the closed-form flow against a fine RK4 integration.
        let f = VelocityField::RadialShear { omega: 0.9, beta: 0.5 };
        let mut x = vec2(0.3, 0.4);
        let target = f.flow(x, 0.8);
        let n = 4000;
        let h = 0.8 / n as f64;
        for _ in 0..n {
            let k1 = f.eval(x, 0.0);
            let k2 = f.eval(x + 0.5 * h * k1, 0.0);
            let k3 = f.eval(x + 0.5 * h * k2, 0.0);
            let k4 = f.eval(x + h * k3, 0.0);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        assert_relative_eq!(x.x, target.x, epsilon = 1e-11);
        assert_relative_eq!(x.y, target.y, epsilon = 1e-11);
    }

    #[test]
    fn angular_rate_endpoints_are_stationary() {
        let f = VelocityField::RadialShear { omega: 2.0, beta: -0.8 };
        assert_eq!(f.angular_rate_prime(0.0), 0.0);
        assert_eq!(f.angular_rate_prime(1.0), 0.0);
        assert_relative_eq!(f.angular_rate(1.0), 2.0 * (1.0 - 0.8), epsilon = 1e-15);
    }
}
