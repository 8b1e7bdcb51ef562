//! Velocity data for the weak side of a comparison.
//!
//! The strong side always carries one of the built-in presets; the weak
//! side may be anything evaluable with a gradient — including fields
//! that are not divergence free, which the functionals tolerate and the
//! inequality checks flag. The trait keeps those candidates interchangeable
//! with the presets.

use crate::math::{outer, Mat2, Vec2};
use crate::velocity::VelocityField;

pub trait FlowField {
    fn eval(&self, x: Vec2, t: f64) -> Vec2;
    fn grad(&self, x: Vec2, t: f64) -> Mat2;
    fn time_deriv(&self, _x: Vec2, _t: f64) -> Vec2 {
        Vec2::zeros()
    }
}

impl FlowField for VelocityField {
    fn eval(&self, x: Vec2, t: f64) -> Vec2 {
        VelocityField::eval(self, x, t)
    }

    fn grad(&self, x: Vec2, t: f64) -> Mat2 {
        VelocityField::grad(self, x, t)
    }

    fn time_deriv(&self, x: Vec2, t: f64) -> Vec2 {
        self.jet(x, t).dt
    }
}

/// A preset plus a compactly supported bump: u = base + amp·(1−q)³ with
/// q = |x−c|²/r². Smooth (C²), generally not divergence free — the
/// standard "weak candidate that is not a flow" fixture. The squared
/// bump has the closed-form integral ∫(1−q)⁶ dx = π r²/7 over its
/// support, which anchors the kinetic-energy oracle in the tests.
#[derive(Debug, Clone, Copy)]
pub struct BumpVelocity {
    pub base: VelocityField,
    pub amp: Vec2,
    pub center: Vec2,
    pub radius: f64,
}

impl BumpVelocity {
    /// Bump value and gradient at x.
    fn bump(&self, x: Vec2) -> (f64, Vec2) {
        let d = x - self.center;
        let q = d.norm_squared() / (self.radius * self.radius);
        if q >= 1.0 {
            return (0.0, Vec2::zeros());
        }
        let m = 1.0 - q;
        (m * m * m, d * (-6.0 * m * m / (self.radius * self.radius)))
    }
}

impl FlowField for BumpVelocity {
    fn eval(&self, x: Vec2, t: f64) -> Vec2 {
        self.base.eval(x, t) + self.amp * self.bump(x).0
    }

    fn grad(&self, x: Vec2, t: f64) -> Mat2 {
        self.base.grad(x, t) + outer(self.amp, self.bump(x).1)
    }

    fn time_deriv(&self, x: Vec2, t: f64) -> Vec2 {
        self.base.jet(x, t).dt
    }
}
