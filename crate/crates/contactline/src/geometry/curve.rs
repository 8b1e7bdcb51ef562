//! Parametrized planar curves and their signed-distance charts.
//!
//! A chart query resolves the nearest point on the curve, then packages
//! the signed distance, nearest-point projection and the transported
//! frame together with their exact first-order space-time derivatives.
//! The identities used here are classical consequences of s being a
//! signed distance with gradient n:
//!
//! * grad s = n(P),   dt s = -(normal speed of the curve at P),
//! * grad(n o P) = -kappa tau (x) tau  with the level-set curvature
//!   kappa = H / (1 - s H),
//! * grad P = tau (x) tau / (1 - s H),
//! * dt (n o P) = -(d/drho of the normal speed) / (q (1 - s H)) tau.
//!
//! Curvature sign convention: H = -(laplacian of s) on the curve, so a
//! circular arc has H = +1/R when n points toward its center; the unit
//! circle with inward normal has H = 1.

use crate::error::Error;
use crate::jet::{ScalarJet, VecJet};
use crate::math::{outer, rot90, Mat2, Vec2};
use crate::numerics::newton_bracketed;

/// Time-dependent parametrized curve with analytic partial derivatives.
///
/// The frame convention ties the tangent to the parametrization and the
/// normal to the tangent by a fixed quarter turn: tau = gamma'/|gamma'|
/// and n = -rot90(tau), both multiplied by `orient()`. Families choose
/// `orient` so that n points into the positive phase (interfaces) or
/// into the domain (boundaries).
pub trait ParamCurve {
    /// Parameter interval (one period for closed curves).
    fn domain(&self) -> (f64, f64);
    fn closed(&self) -> bool {
        false
    }
    /// +1 to keep the parametrization frame, -1 to flip n and tau.
    fn orient(&self) -> f64 {
        1.0
    }
    fn point(&self, rho: f64, t: f64) -> Vec2;
    fn d_rho(&self, rho: f64, t: f64) -> Vec2;
    fn d_rho_rho(&self, rho: f64, t: f64) -> Vec2;
    fn d_t(&self, rho: f64, t: f64) -> Vec2;
    fn d_t_rho(&self, rho: f64, t: f64) -> Vec2;
    /// Exact nearest-parameter seed, when the family has one in closed
    /// form. The generic resolver falls back to a dense scan.
    fn nearest_seed(&self, _p: Vec2, _t: f64) -> Option<f64> {
        None
    }
}

/// Curve data at one parameter, with linear extension beyond the ends of
/// an open curve (position continues along the endpoint tangent; the
/// extension inherits the endpoint's motion).
struct CurveData {
    gamma: Vec2,
    d_rho: Vec2,
    d_rho_rho: Vec2,
    d_t: Vec2,
    d_t_rho: Vec2,
}

fn eval_ext(curve: &impl ParamCurve, rho: f64, t: f64) -> CurveData {
    let (a, b) = curve.domain();
    if curve.closed() || (a..=b).contains(&rho) {
        return CurveData {
            gamma: curve.point(rho, t),
            d_rho: curve.d_rho(rho, t),
            d_rho_rho: curve.d_rho_rho(rho, t),
            d_t: curve.d_t(rho, t),
            d_t_rho: curve.d_t_rho(rho, t),
        };
    }
    let e = if rho < a { a } else { b };
    let dr = curve.d_rho(e, t);
    let dtr = curve.d_t_rho(e, t);
    CurveData {
        gamma: curve.point(e, t) + (rho - e) * dr,
        d_rho: dr,
        d_rho_rho: Vec2::zeros(),
        d_t: curve.d_t(e, t) + (rho - e) * dtr,
        d_t_rho: dtr,
    }
}

/// Stationarity function of the squared distance: F(rho) = (p - gamma) . gamma'
/// together with its derivative. Roots of F are candidate feet.
fn foot_eq(curve: &impl ParamCurve, p: Vec2, rho: f64, t: f64) -> (f64, f64) {
    let d = eval_ext(curve, rho, t);
    let w = p - d.gamma;
    (w.dot(&d.d_rho), -d.d_rho.norm_squared() + w.dot(&d.d_rho_rho))
}

const SCAN_N: usize = 257;

/// Parameter of the nearest point of the (extended) curve.
///
/// Open curves are extended by their endpoint tangent lines, so the
/// returned parameter may fall outside the domain; the caller can detect
/// this and flag the evaluation as extended. Closed curves wrap.
pub fn nearest_param(curve: &impl ParamCurve, p: Vec2, t: f64) -> f64 {
    nearest_param_dense(curve, p, t, SCAN_N)
}

pub fn nearest_param_dense(curve: &impl ParamCurve, p: Vec2, t: f64, n: usize) -> f64 {
    let (a, b) = curve.domain();
    if curve.closed() {
        let h = (b - a) / n as f64;
        let mid = match curve.nearest_seed(p, t) {
            Some(seed) => seed,
            None => {
                let mut best = (f64::INFINITY, 0usize);
                for k in 0..n {
                    let d2 = (p - curve.point(a + h * k as f64, t)).norm_squared();
                    if d2 < best.0 {
                        best = (d2, k);
                    }
                }
                a + h * best.1 as f64
            }
        };
        return polish(curve, p, t, mid - h, mid + h);
    }
    // open curve: interior candidate (from an analytic seed or a scan),
    // then compare against the exact feet on the two tangent-line
    // extensions
    let h = (b - a) / (n - 1) as f64;
    let mid = match curve.nearest_seed(p, t) {
        Some(seed) => seed.clamp(a, b),
        None => {
            let mut best = (f64::INFINITY, 0usize);
            for k in 0..n {
                let d2 = (p - curve.point(a + h * k as f64, t)).norm_squared();
                if d2 < best.0 {
                    best = (d2, k);
                }
            }
            a + h * best.1 as f64
        }
    };
    let mut candidates: Vec<f64> = Vec::with_capacity(3);
    candidates.push(polish(curve, p, t, (mid - h).max(a), (mid + h).min(b)));
    for e in [a, b] {
        let g = curve.point(e, t);
        let dr = curve.d_rho(e, t);
        let foot = e + (p - g).dot(&dr) / dr.norm_squared();
        if (e == a && foot < a) || (e == b && foot > b) {
            candidates.push(foot);
        }
    }
    candidates
        .into_iter()
        .min_by(|x, y| {
            let dx = (p - eval_ext(curve, *x, t).gamma).norm_squared();
            let dy = (p - eval_ext(curve, *y, t).gamma).norm_squared();
            dx.partial_cmp(&dy).unwrap()
        })
        .unwrap()
}

fn polish(curve: &impl ParamCurve, p: Vec2, t: f64, lo: f64, hi: f64) -> f64 {
    let f_lo = foot_eq(curve, p, lo, t).0;
    let f_hi = foot_eq(curve, p, hi, t).0;
    if f_lo.signum() == f_hi.signum() {
        // no zero of F in the bracket; fall back to the closer end
        let dl = (p - eval_ext(curve, lo, t).gamma).norm_squared();
        let dh = (p - eval_ext(curve, hi, t).gamma).norm_squared();
        return if dl <= dh { lo } else { hi };
    }
    newton_bracketed(|r| foot_eq(curve, p, r, t), lo, hi, 1e-14)
}

/// True distance to the curve itself (feet clamped to the domain, no
/// tangent extension). Used by the localization-radius search.
pub fn dist_to_curve(curve: &impl ParamCurve, p: Vec2, t: f64, n: usize) -> f64 {
    let (a, b) = curve.domain();
    let rho = nearest_param_dense(curve, p, t, n).clamp(a, b);
    let interior = (p - curve.point(rho, t)).norm();
    if curve.closed() {
        return interior;
    }
    interior
        .min((p - curve.point(a, t)).norm())
        .min((p - curve.point(b, t)).norm())
}

/// Plain chart snapshot: signed distance, nearest point, frame, curvature.
#[derive(Debug, Clone, Copy)]
pub struct ChartEval {
    pub s: f64,
    pub p: Vec2,
    pub n: Vec2,
    pub tau: Vec2,
    pub h: f64,
    /// True when the foot lies on a tangent-line extension of an open curve.
    pub extended: bool,
}

/// Chart snapshot plus exact first-order space-time jets of all fields.
#[derive(Debug, Clone, Copy)]
pub struct ChartJet {
    /// Signed distance: dx = n o P, dt = -(normal speed at the foot).
    pub s: ScalarJet,
    /// Nearest-point projection.
    pub p: VecJet,
    /// Unit normal transported off the curve, n o P.
    pub n: VecJet,
    /// Unit tangent tau o P = rot90(n o P).
    pub tau: VecJet,
    /// Curvature at the foot.
    pub h: f64,
    /// Level-set curvature H / (1 - s H) at the query point.
    pub kappa: f64,
    /// Foot parameter (beyond the domain when extended).
    pub rho: f64,
    pub extended: bool,
}

impl ChartJet {
    pub fn snapshot(&self) -> ChartEval {
        ChartEval {
            s: self.s.v,
            p: self.p.v,
            n: self.n.v,
            tau: self.tau.v,
            h: self.h,
            extended: self.extended,
        }
    }
}

/// Evaluate the signed-distance chart of `curve` at p, requiring
/// |s| < band (the certified one-to-one tube half-width).
pub fn chart_jet(
    curve: &impl ParamCurve,
    p: Vec2,
    t: f64,
    band: f64,
) -> Result<ChartJet, Error> {
    let rho = nearest_param(curve, p, t);
    let (a, b) = curve.domain();
    let extended = !curve.closed() && !(a..=b).contains(&rho);
    let d = eval_ext(curve, rho, t);
    let q = d.d_rho.norm();
    if q < 1e-12 {
        return Err(Error::DegenerateGeometry(format!(
            "vanishing parametrization speed at rho = {rho}"
        )));
    }
    let o = curve.orient();
    let tau = o / q * d.d_rho;
    let n = -rot90(tau);
    let w = p - d.gamma;
    let s = w.dot(&n);
    if s.abs() >= band {
        return Err(Error::OutsideTubularBand { x: p.x, y: p.y, dist: s.abs(), band });
    }
    let h = d.d_rho_rho.dot(&n) / (q * q);
    let denom = 1.0 - s * h;
    if denom <= 1e-9 {
        // beyond the focal point of the curve
        return Err(Error::OutsideTubularBand { x: p.x, y: p.y, dist: s.abs(), band });
    }
    let kappa = h / denom;
    // normal speed of the curve and its parameter derivative
    let v_n = d.d_t.dot(&n);
    let v_n_rho = d.d_t_rho.dot(&n) + d.d_t.dot(&(-h * q * tau));
    let tt = outer(tau, tau);
    let s_jet = ScalarJet { v: s, dx: n, dt: -v_n };
    let n_jet = VecJet { v: n, dx: -kappa * tt, dt: -(v_n_rho / (q * denom)) * tau };
    let j = Mat2::new(0.0, -1.0, 1.0, 0.0);
    let tau_jet = VecJet { v: tau, dx: j * n_jet.dx, dt: j * n_jet.dt };
    let p_jet = VecJet {
        v: d.gamma,
        dx: tt / denom,
        dt: -s_jet.dt * n - s * n_jet.dt,
    };
    Ok(ChartJet { s: s_jet, p: p_jet, n: n_jet, tau: tau_jet, h, kappa, rho, extended })
}

/// Frame of the curve at a parameter: (n, tau, curvature, speed).
pub fn curve_frames(curve: &impl ParamCurve, rho: f64, t: f64) -> (Vec2, Vec2, f64, f64) {
    let dr = curve.d_rho(rho, t);
    let q = dr.norm();
    let tau = curve.orient() / q * dr;
    let n = -rot90(tau);
    let h = curve.d_rho_rho(rho, t).dot(&n) / (q * q);
    (n, tau, h, q)
}

/// Time derivative of the frame at a fixed parameter.
pub fn frame_time_derivative(curve: &impl ParamCurve, rho: f64, t: f64) -> (Vec2, Vec2) {
    let dr = curve.d_rho(rho, t);
    let q = dr.norm();
    let tau_raw = dr / q;
    let dtr = curve.d_t_rho(rho, t);
    let dtau = curve.orient() / q * (dtr - tau_raw.dot(&dtr) * tau_raw);
    (-rot90(dtau), dtau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec2;
    use approx::assert_relative_eq;

    /// Circular arc fixture: radius R about the origin, n toward the center.
    struct Arc {
        r: f64,
    }

    impl ParamCurve for Arc {
        fn domain(&self) -> (f64, f64) {
            (-1.2, 1.2)
        }
        fn point(&self, rho: f64, _t: f64) -> Vec2 {
            self.r * vec2(rho.cos(), rho.sin())
        }
        fn d_rho(&self, rho: f64, _t: f64) -> Vec2 {
            self.r * vec2(-rho.sin(), rho.cos())
        }
        fn d_rho_rho(&self, rho: f64, _t: f64) -> Vec2 {
            -self.r * vec2(rho.cos(), rho.sin())
        }
        fn d_t(&self, _rho: f64, _t: f64) -> Vec2 {
            Vec2::zeros()
        }
        fn d_t_rho(&self, _rho: f64, _t: f64) -> Vec2 {
            Vec2::zeros()
        }
        fn orient(&self) -> f64 {
            // parametrization frame has n outward; flip toward the center
            -1.0
        }
    }

    #[test]
    fn arc_chart_has_center_curvature() {
        let arc = Arc { r: 0.8 };
        let c = chart_jet(&arc, vec2(0.5, 0.1), 0.0, 0.8).unwrap();
        assert_relative_eq!(c.h, 1.0 / 0.8, epsilon = 1e-12);
        // signed distance grows toward the center
        assert_relative_eq!(c.s.v, 0.8 - (0.5f64 * 0.5 + 0.01).sqrt(), epsilon = 1e-12);
        assert_relative_eq!(c.n.v.dot(&c.p.v), -0.8, epsilon = 1e-12);
        // chart consistency: P + s n reproduces the query
        let back = c.p.v + c.s.v * c.n.v;
        assert_relative_eq!(back.x, 0.5, epsilon = 1e-12);
        assert_relative_eq!(back.y, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn chart_jets_match_finite_differences() {
        let arc = Arc { r: 0.8 };
        let p = vec2(0.55, 0.2);
        let c = chart_jet(&arc, p, 0.0, 0.8).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            let mut dp = Vec2::zeros();
            dp[j] = h;
            let sp = chart_jet(&arc, p + dp, 0.0, 0.8).unwrap();
            let sm = chart_jet(&arc, p - dp, 0.0, 0.8).unwrap();
            assert_relative_eq!(c.s.dx[j], (sp.s.v - sm.s.v) / (2.0 * h), epsilon = 1e-8);
            for i in 0..2 {
                assert_relative_eq!(
                    c.n.dx[(i, j)],
                    (sp.n.v[i] - sm.n.v[i]) / (2.0 * h),
                    epsilon = 1e-7
                );
                assert_relative_eq!(
                    c.p.dx[(i, j)],
                    (sp.p.v[i] - sm.p.v[i]) / (2.0 * h),
                    epsilon = 1e-7
                );
            }
        }
    }

    #[test]
    fn feet_beyond_endpoints_use_the_tangent_extension() {
        let arc = Arc { r: 1.0 };
        // far past the upper parameter end
        let end = arc.point(1.2, 0.0);
        let tangent = arc.d_rho(1.2, 0.0);
        let p = end + 0.3 * tangent + 0.05 * vec2(end.x, end.y);
        let c = chart_jet(&arc, p, 0.0, 1.0).unwrap();
        assert!(c.extended);
        assert!(c.rho > 1.2);
        assert_relative_eq!(c.h, 0.0);
        // the extension is a straight line: foot + s n reproduces p
        let back = c.p.v + c.s.v * c.n.v;
        assert_relative_eq!(back.x, p.x, epsilon = 1e-12);
        assert_relative_eq!(back.y, p.y, epsilon = 1e-12);
    }

    #[test]
    fn band_violations_are_reported() {
        let arc = Arc { r: 0.8 };
        match chart_jet(&arc, vec2(0.0, 0.0), 0.0, 0.3) {
            Err(Error::OutsideTubularBand { dist, band, .. }) => {
                assert!(dist >= band);
            }
            other => panic!("expected a band violation, got {other:?}"),
        }
    }

    #[test]
    fn clamped_distance_uses_endpoints() {
        let arc = Arc { r: 1.0 };
        let end = arc.point(1.2, 0.0);
        let p = end + vec2(0.2, 0.2);
        let d = dist_to_curve(&arc, p, 0.0, 257);
        assert!(d <= (p - end).norm() + 1e-12);
        assert!(d >= 0.9 * (p - end).norm().min((p.norm() - 1.0).abs()));
    }
}
