//! First-order space-time jets.
//!
//! Every constructed field in this crate (charts, cutoffs, calibrations,
//! weights) is evaluated together with its spatial gradient and its time
//! derivative, assembled analytically through product/chain rules. Finite
//! differences are kept for *cross-checks* only: near contact points the
//! interpolation profiles have gradients growing like 1/distance, and
//! differencing them numerically would drown exactly the residual orders
//! the verification suites need to observe.

use crate::math::{outer, Mat2, Vec2};

/// Scalar field value with spatial gradient and time derivative.
#[derive(Debug, Clone, Copy)]
pub struct ScalarJet {
    pub v: f64,
    /// Spatial gradient.
    pub dx: Vec2,
    /// Partial time derivative at fixed position.
    pub dt: f64,
}

/// Vector field value with Jacobian and time derivative.
///
/// Jacobian convention: `dx[(i, j)] = d v_i / d x_j`.
#[derive(Debug, Clone, Copy)]
pub struct VecJet {
    pub v: Vec2,
    pub dx: Mat2,
    pub dt: Vec2,
}

impl ScalarJet {
    pub fn constant(v: f64) -> Self {
        ScalarJet { v, dx: Vec2::zeros(), dt: 0.0 }
    }

    pub fn add(self, o: ScalarJet) -> Self {
        ScalarJet { v: self.v + o.v, dx: self.dx + o.dx, dt: self.dt + o.dt }
    }

    pub fn sub(self, o: ScalarJet) -> Self {
        ScalarJet { v: self.v - o.v, dx: self.dx - o.dx, dt: self.dt - o.dt }
    }

    pub fn neg(self) -> Self {
        ScalarJet { v: -self.v, dx: -self.dx, dt: -self.dt }
    }

    pub fn scale(self, a: f64) -> Self {
        ScalarJet { v: a * self.v, dx: a * self.dx, dt: a * self.dt }
    }

    pub fn mul(self, o: ScalarJet) -> Self {
        ScalarJet {
            v: self.v * o.v,
            dx: self.v * o.dx + o.v * self.dx,
            dt: self.v * o.dt + o.v * self.dt,
        }
    }

    /// Chain rule through a smooth scalar function with derivative `dfdv`.
    pub fn chain(self, f: f64, dfdv: f64) -> Self {
        ScalarJet { v: f, dx: dfdv * self.dx, dt: dfdv * self.dt }
    }

    /// Advective (material) derivative along a velocity value.
    pub fn material(&self, vel: Vec2) -> f64 {
        self.dt + self.dx.dot(&vel)
    }
}

impl VecJet {
    pub fn constant(v: Vec2) -> Self {
        VecJet { v, dx: Mat2::zeros(), dt: Vec2::zeros() }
    }

    pub fn zero() -> Self {
        Self::constant(Vec2::zeros())
    }

    pub fn add(self, o: VecJet) -> Self {
        VecJet { v: self.v + o.v, dx: self.dx + o.dx, dt: self.dt + o.dt }
    }

    pub fn sub(self, o: VecJet) -> Self {
        VecJet { v: self.v - o.v, dx: self.dx - o.dx, dt: self.dt - o.dt }
    }

    pub fn scale(self, a: f64) -> Self {
        VecJet { v: a * self.v, dx: a * self.dx, dt: a * self.dt }
    }

    /// Product with a scalar jet: grad(s w) = w (grad s)^T + s grad w.
    pub fn scale_jet(self, s: ScalarJet) -> Self {
        VecJet {
            v: s.v * self.v,
            dx: outer(self.v, s.dx) + s.v * self.dx,
            dt: s.dt * self.v + s.v * self.dt,
        }
    }

    /// Dot product of two vector jets.
    pub fn dot(self, o: VecJet) -> ScalarJet {
        ScalarJet {
            v: self.v.dot(&o.v),
            dx: self.dx.transpose() * o.v + o.dx.transpose() * self.v,
            dt: self.dt.dot(&o.v) + self.v.dot(&o.dt),
        }
    }

    pub fn norm_sq(self) -> ScalarJet {
        self.dot(self)
    }

    /// Normalized field xi = v/|v| with exact first-order jets.
    pub fn normalize(self) -> Self {
        let n = self.v.norm();
        let xi = self.v / n;
        let proj = Mat2::identity() - outer(xi, xi);
        VecJet { v: xi, dx: proj * self.dx / n, dt: proj * self.dt / n }
    }

    pub fn divergence(&self) -> f64 {
        self.dx.m11 + self.dx.m22
    }

    /// Advective derivative (v_adv . grad) of this field.
    pub fn advect(&self, vel: Vec2) -> Vec2 {
        self.dt + self.dx * vel
    }
}

/// Transport residual of a candidate normal extension along velocity `v`:
/// the value of  d_t xi + (v . grad) xi + (Id - xi x xi) (grad v)^T xi.
pub fn transport_residual(xi: &VecJet, v: Vec2, grad_v: &Mat2) -> Vec2 {
    let proj = Mat2::identity() - outer(xi.v, xi.v);
    xi.dt + xi.dx * v + proj * (grad_v.transpose() * xi.v)
}

/// Material derivative of |xi|^2 along velocity `v`.
pub fn length_transport(xi: &VecJet, v: Vec2) -> f64 {
    xi.norm_sq().material(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec2;
    use approx::assert_relative_eq;

    // A hand-made smooth field for exercising the jet algebra:
    // s(x, t) = sin(x1 + 2 t) * x2, w(x, t) = (x1^2, x1 x2 + t).
    fn s_jet(x: Vec2, t: f64) -> ScalarJet {
        ScalarJet {
            v: (x.x + 2.0 * t).sin() * x.y,
            dx: vec2((x.x + 2.0 * t).cos() * x.y, (x.x + 2.0 * t).sin()),
            dt: 2.0 * (x.x + 2.0 * t).cos() * x.y,
        }
    }

    fn w_jet(x: Vec2, t: f64) -> VecJet {
        VecJet {
            v: vec2(x.x * x.x, x.x * x.y + t),
            dx: Mat2::new(2.0 * x.x, 0.0, x.y, x.x),
            dt: vec2(0.0, 1.0),
        }
    }

    fn fd_scalar(f: impl Fn(Vec2, f64) -> f64, x: Vec2, t: f64) -> (Vec2, f64) {
        let h = 1e-6;
        let gx = (f(x + vec2(h, 0.0), t) - f(x - vec2(h, 0.0), t)) / (2.0 * h);
        let gy = (f(x + vec2(0.0, h), t) - f(x - vec2(0.0, h), t)) / (2.0 * h);
        let gt = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
        (vec2(gx, gy), gt)
    }

    #[test]
    fn product_and_dot_rules_match_finite_differences() {
        let x = vec2(0.4, -0.8);
        let t = 0.3;
        let prod = w_jet(x, t).scale_jet(s_jet(x, t));
        let (gx0, gt0) = fd_scalar(|x, t| s_jet(x, t).v * w_jet(x, t).v.x, x, t);
        assert_relative_eq!(prod.dx.row(0).transpose().into_owned(), gx0, epsilon = 1e-8);
        assert_relative_eq!(prod.dt.x, gt0, epsilon = 1e-8);

        let dot = w_jet(x, t).dot(w_jet(x, t));
        let (gx, gt) = fd_scalar(|x, t| w_jet(x, t).v.norm_squared(), x, t);
        assert_relative_eq!(dot.dx, gx, epsilon = 1e-7);
        assert_relative_eq!(dot.dt, gt, epsilon = 1e-8);
    }

    #[test]
    fn normalize_jet_matches_finite_differences() {
        let x = vec2(0.9, 0.2);
        let t = 0.1;
        let n = w_jet(x, t).normalize();
        assert_relative_eq!(n.v.norm(), 1.0, epsilon = 1e-14);
        let (gx0, gt0) = fd_scalar(|x, t| w_jet(x, t).v.normalize().x, x, t);
        assert_relative_eq!(n.dx.row(0).transpose().into_owned(), gx0, epsilon = 1e-7);
        assert_relative_eq!(n.dt.x, gt0, epsilon = 1e-8);
    }

    #[test]
    fn normalized_field_has_zero_length_transport() {
        let x = vec2(0.9, 0.2);
        let n = w_jet(x, 0.0).normalize();
        // |xi| = 1 identically, so the material derivative of |xi|^2 must
        // vanish no matter the velocity.
        assert_relative_eq!(length_transport(&n, vec2(3.0, -1.0)), 0.0, epsilon = 1e-14);
    }
}
