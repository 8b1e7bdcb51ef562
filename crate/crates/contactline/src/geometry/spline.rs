//! Interpolating cubic splines through planar marker points.
//!
//! Splines are parametrized by normalized chord length and use
//! not-a-knot end conditions, so a single cubic is reproduced exactly
//! and endpoint tangents converge at full order — the endpoint tangent
//! is what the contact-angle diagnostic reads off, so the end condition
//! matters more here than usual.

use crate::math::Vec2;
use crate::numerics::gauss_legendre;

#[derive(Debug, Clone)]
pub struct CubicSpline {
    u: Vec<f64>,
    pts: Vec<Vec2>,
    /// Second-derivative values (moments) at the knots.
    m: Vec<Vec2>,
}

impl CubicSpline {
    /// Interpolate the markers in order, parametrized by chord length
    /// scaled to [0, 1]. Needs at least two distinct points.
    pub fn fit(points: &[Vec2]) -> Self {
        assert!(points.len() >= 2, "spline needs at least two markers");
        let n = points.len();
        let mut u = Vec::with_capacity(n);
        let mut acc = 0.0;
        u.push(0.0);
        for w in points.windows(2) {
            acc += (w[1] - w[0]).norm();
            u.push(acc);
        }
        assert!(acc > 0.0, "spline markers are all coincident");
        for v in &mut u {
            *v /= acc;
        }
        let m = solve_moments(&u, points);
        CubicSpline { u, pts: points.to_vec(), m }
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.pts
    }

    pub fn knots(&self) -> &[f64] {
        &self.u
    }

    fn segment(&self, u: f64) -> usize {
        // clamp into the knot range; evaluation outside extrapolates the
        // end segment's cubic
        match self.u.binary_search_by(|k| k.partial_cmp(&u).unwrap()) {
            Ok(i) => i.min(self.u.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.u.len() - 2),
        }
    }

    pub fn eval(&self, u: f64) -> Vec2 {
        let k = self.segment(u);
        let (u0, u1) = (self.u[k], self.u[k + 1]);
        let h = u1 - u0;
        let (a, b) = (u1 - u, u - u0);
        self.m[k] * (a * a * a) / (6.0 * h)
            + self.m[k + 1] * (b * b * b) / (6.0 * h)
            + (self.pts[k] / h - self.m[k] * h / 6.0) * a
            + (self.pts[k + 1] / h - self.m[k + 1] * h / 6.0) * b
    }

    pub fn d1(&self, u: f64) -> Vec2 {
        let k = self.segment(u);
        let (u0, u1) = (self.u[k], self.u[k + 1]);
        let h = u1 - u0;
        let (a, b) = (u1 - u, u - u0);
        -self.m[k] * (a * a) / (2.0 * h)
            + self.m[k + 1] * (b * b) / (2.0 * h)
            + (self.pts[k + 1] - self.pts[k]) / h
            - (self.m[k + 1] - self.m[k]) * h / 6.0
    }

    pub fn d2(&self, u: f64) -> Vec2 {
        let k = self.segment(u);
        let (u0, u1) = (self.u[k], self.u[k + 1]);
        let h = u1 - u0;
        (self.m[k] * (u1 - u) + self.m[k + 1] * (u - u0)) / h
    }

    /// Integral of f(position, d/du position) du over the whole spline,
    /// by Gauss quadrature on each knot interval.
    pub fn line_integral(&self, order: usize, mut f: impl FnMut(Vec2, Vec2) -> f64) -> f64 {
        let nodes = gauss_legendre(order);
        let mut total = 0.0;
        for k in 0..self.u.len() - 1 {
            let (u0, u1) = (self.u[k], self.u[k + 1]);
            let half = 0.5 * (u1 - u0);
            let mid = 0.5 * (u0 + u1);
            for &(x, w) in nodes.iter() {
                let u = mid + half * x;
                total += w * half * f(self.eval(u), self.d1(u));
            }
        }
        total
    }

    pub fn arc_length(&self) -> f64 {
        self.line_integral(16, |_, d| d.norm())
    }

    /// Replace the markers by n points equally spaced in arc length
    /// (keeping both endpoints), and refit.
    pub fn resample_by_arc_length(&self, n: usize) -> CubicSpline {
        assert!(n >= 2);
        // cumulative length at the knots plus dense mid-knot samples
        let dense = 8 * self.u.len();
        let mut us = Vec::with_capacity(dense + 1);
        let mut ls = Vec::with_capacity(dense + 1);
        let mut acc = 0.0;
        us.push(0.0);
        ls.push(0.0);
        let nodes = gauss_legendre(8);
        for k in 0..dense {
            let u0 = k as f64 / dense as f64;
            let u1 = (k + 1) as f64 / dense as f64;
            let half = 0.5 * (u1 - u0);
            let mid = 0.5 * (u0 + u1);
            let mut seg = 0.0;
            for &(x, w) in nodes.iter() {
                seg += w * half * self.d1(mid + half * x).norm();
            }
            acc += seg;
            us.push(u1);
            ls.push(acc);
        }
        let total = acc;
        let mut out = Vec::with_capacity(n);
        out.push(self.pts[0]);
        for i in 1..n - 1 {
            let target = total * i as f64 / (n - 1) as f64;
            let j = ls.partition_point(|&l| l < target).min(ls.len() - 1);
            let (l0, l1) = (ls[j - 1], ls[j]);
            let w = if l1 > l0 { (target - l0) / (l1 - l0) } else { 0.0 };
            out.push(self.eval(us[j - 1] + w * (us[j] - us[j - 1])));
        }
        out.push(*self.pts.last().unwrap());
        CubicSpline::fit(&out)
    }
}

/// Not-a-knot moment system. Interior rows are the classical continuity
/// equations; the end rows impose third-derivative continuity at the
/// first and last interior knots and are eliminated to keep the system
/// tridiagonal.
fn solve_moments(u: &[f64], y: &[Vec2]) -> Vec<Vec2> {
    let n = u.len();
    if n == 2 {
        return vec![Vec2::zeros(); 2];
    }
    let h: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
    let d = |k: usize| (y[k + 1] - y[k]) / h[k] - (y[k] - y[k - 1]) / h[k - 1];
    if n == 3 {
        // a single interior knot: fall back to natural ends
        let m1 = d(1) * (3.0 / (h[0] + h[1]));
        return vec![Vec2::zeros(), m1, Vec2::zeros()];
    }
    // unknowns M_1 .. M_{n-2}
    let m = n - 2;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![Vec2::zeros(); m];
    for (i, k) in (1..n - 1).enumerate() {
        lower[i] = h[k - 1] / 6.0;
        diag[i] = (h[k - 1] + h[k]) / 3.0;
        upper[i] = h[k] / 6.0;
        rhs[i] = d(k);
    }
    // eliminate M_0 = ((h0+h1) M_1 - h0 M_2) / h1 from the first row
    diag[0] = (h[0] + h[1]) * (h[0] + 2.0 * h[1]) / (6.0 * h[1]);
    upper[0] = (h[1] * h[1] - h[0] * h[0]) / (6.0 * h[1]);
    // eliminate M_{n-1} symmetrically from the last row
    let (ha, hb) = (h[n - 2], h[n - 3]); // last and second-to-last gaps
    diag[m - 1] = (ha + hb) * (ha + 2.0 * hb) / (6.0 * hb);
    lower[m - 1] = (hb * hb - ha * ha) / (6.0 * hb);

    // Thomas algorithm
    for i in 1..m {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] = rhs[i] - rhs[i - 1] * w;
    }
    let mut mid = vec![Vec2::zeros(); m];
    mid[m - 1] = rhs[m - 1] / diag[m - 1];
    for i in (0..m - 1).rev() {
        mid[i] = (rhs[i] - mid[i + 1] * upper[i]) / diag[i];
    }

    let mut out = Vec::with_capacity(n);
    out.push((mid[0] * (h[0] + h[1]) - mid[1] * h[0]) / h[1]);
    out.extend_from_slice(&mid);
    out.push((mid[m - 1] * (hb + ha) - mid[m - 2] * ha) / hb);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec2;
    use approx::assert_relative_eq;

    #[test]
    fn interpolation_and_moment_equations_hold() {
        // the solved moments must satisfy every interior continuity
        // equation and the third-derivative matching at both ends; that,
        // plus hitting the nodes, pins the not-a-knot spline uniquely
        let f = |x: f64| vec2(x, 0.3 * x * x * x - x * x + 0.5 * x + 2.0);
        let xs = [0.0, 0.17, 0.3, 0.55, 0.61, 0.8, 1.0];
        let pts: Vec<Vec2> = xs.iter().map(|&x| f(x)).collect();
        let sp = CubicSpline::fit(&pts);

        for (k, p) in pts.iter().enumerate() {
            assert_relative_eq!((sp.eval(sp.knots()[k]) - p).norm(), 0.0, epsilon = 1e-12);
        }

        let u = sp.knots();
        let m = &sp.m;
        let h: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
        let n = u.len();
        for k in 1..n - 1 {
            let lhs = m[k - 1] * (h[k - 1] / 6.0)
                + m[k] * ((h[k - 1] + h[k]) / 3.0)
                + m[k + 1] * (h[k] / 6.0);
            let rhs = (pts[k + 1] - pts[k]) / h[k] - (pts[k] - pts[k - 1]) / h[k - 1];
            assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-12);
        }
        let dddl = (m[1] - m[0]) / h[0] - (m[2] - m[1]) / h[1];
        let dddr = (m[n - 1] - m[n - 2]) / h[n - 2] - (m[n - 2] - m[n - 3]) / h[n - 3];
        assert_relative_eq!(dddl.norm(), 0.0, epsilon = 1e-10);
        assert_relative_eq!(dddr.norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let pts: Vec<Vec2> = (0..12)
            .map(|k| {
                let a = k as f64 / 11.0 * 2.0;
                vec2(a.cos(), 0.8 * a.sin())
            })
            .collect();
        let sp = CubicSpline::fit(&pts);
        let h = 1e-6;
        for &u in &[0.15, 0.4, 0.62, 0.9] {
            let fd = (sp.eval(u + h) - sp.eval(u - h)) / (2.0 * h);
            let an = sp.d1(u);
            assert_relative_eq!(an.x, fd.x, epsilon = 1e-7);
            assert_relative_eq!(an.y, fd.y, epsilon = 1e-7);
        }
    }

    #[test]
    fn circle_markers_recover_length_and_curvature() {
        let n = 200;
        let pts: Vec<Vec2> = (0..=n)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / n as f64;
                vec2(a.cos(), a.sin())
            })
            .collect();
        let sp = CubicSpline::fit(&pts);
        assert_relative_eq!(sp.arc_length(), std::f64::consts::PI, epsilon = 1e-8);
        // curvature |x' cross x''| / |x'|^3 = 1 on the half circle
        let d1 = sp.d1(0.37);
        let d2 = sp.d2(0.37);
        let kappa = (d1.x * d2.y - d1.y * d2.x).abs() / d1.norm().powi(3);
        assert_relative_eq!(kappa, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn arc_length_resampling_equalizes_spacing() {
        // strongly uneven markers along a parabola
        let pts: Vec<Vec2> = [0.0, 0.02, 0.05, 0.3, 0.35, 0.7, 1.0]
            .iter()
            .map(|&x| vec2(x, x * x))
            .collect();
        let r = CubicSpline::fit(&pts).resample_by_arc_length(24);
        let segs: Vec<f64> = r.nodes().windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let (min, max) = segs
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
        assert!(max / min < 1.02, "spacing ratio {}", max / min);
        assert_eq!(r.nodes()[0], pts[0]);
        assert_eq!(*r.nodes().last().unwrap(), *pts.last().unwrap());
    }
}
