//! Central finite differences, used as cross-checks against the analytic
//! jets (never as the primary derivative path near contact points, where
//! profile gradients grow like one over distance).

use crate::math::{vec2, Mat2, Vec2};

/// Second-order central difference.
pub fn d1_central2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Fourth-order central difference.
pub fn d1_central4(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order gradient of a scalar field.
pub fn grad4(f: impl Fn(Vec2) -> f64, x: Vec2, h: f64) -> Vec2 {
    vec2(
        d1_central4(|s| f(vec2(s, x.y)), x.x, h),
        d1_central4(|s| f(vec2(x.x, s)), x.y, h),
    )
}

/// Fourth-order Jacobian of a vector field; row i is the gradient of f_i.
pub fn jacobian4(f: impl Fn(Vec2) -> Vec2 + Copy, x: Vec2, h: f64) -> Mat2 {
    let gx = grad4(|p| f(p).x, x, h);
    let gy = grad4(|p| f(p).y, x, h);
    Mat2::new(gx.x, gx.y, gy.x, gy.y)
}

/// Five-point Laplacian stencil (second order).
pub fn laplacian5(f: impl Fn(Vec2) -> f64, x: Vec2, h: f64) -> f64 {
    (f(vec2(x.x + h, x.y)) + f(vec2(x.x - h, x.y)) + f(vec2(x.x, x.y + h)) + f(vec2(x.x, x.y - h))
        - 4.0 * f(x))
        / (h * h)
}

/// Richardson-style consistency check: evaluates the fourth-order stencil
/// at steps h and h/2 and returns the finer value together with their
/// discrepancy, which bounds the truncation error of the coarser one.
pub fn d1_richardson(f: impl Fn(f64) -> f64 + Copy, x: f64, h: f64) -> (f64, f64) {
    let coarse = d1_central4(f, x, h);
    let fine = d1_central4(f, x, h / 2.0);
    (fine, (coarse - fine).abs())
}
