//! The transported weight: a signed, Lipschitz scalar field that
//! vanishes exactly on the interface and the container wall, is negative
//! throughout the positive phase and positive in the other, saturates at
//! -+1 in the bulk, and whose advective derivative is controlled by the
//! weight itself.
//!
//! The construction mirrors the calibration's geography. Within a band
//! around the interface the weight is a truncated multiple of the signed
//! interface distance, within a band along the wall a truncated multiple
//! of the wall distance signed by the phase, and near each contact point
//! the two candidates are blended across the same wedges (and with the
//! same interpolation parameter) the calibration uses. Both truncations
//! run on the calibration's ribbon scale `delta * r_hat`, so every
//! profile has saturated to -+1 well before its band runs out; the only
//! seams that ever see an unsaturated profile are the contact-ball
//! spheres and the wedge rays, and those are certified (by sampling) and
//! verified (by forced-branch evaluation) rather than assumed.
//!
//! The band half-width is chosen as a fraction of the smallest
//! contact-ball radius so that the two bands can only overlap inside the
//! balls, where the wedges arbitrate; a sampled certificate checks that
//! the wall band, outside the balls, indeed stays clear of the interface
//! band wherever it would matter.

use crate::calibration::{interp_lambda, GlobalCalibration};
use crate::error::Error;
use crate::geometry::{dist_to_curve, LocalizationRadii, ParamCurve, Wedge};
use crate::jet::ScalarJet;
use crate::math::Vec2;
use crate::numerics::{linspace, log_spaced, order_fit, rng_from_seed, sample_unit_disk, OrderFit};
use crate::profiles::theta_bar;
use crate::scene::Scene;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

/// Starting band half-width, as a fraction of the smallest contact ball.
/// The two bands meet at a right angle at each contact, so any point
/// carrying both band labels sits within sqrt(2) * band of the contact;
/// 0.65 keeps that inside the ball with margin for curvature.
const BAND_FACTOR: f64 = 0.65;
/// The profiles saturate at the ribbon scale; the bands must outlast
/// that, with a little float headroom, for the region edges to be exact.
const BAND_FLOOR_FACTOR: f64 = 1.1;
/// Sampling density of the brute-force distance queries.
const DIST_SCAN: usize = 512;

/// Where a point landed in the region dispatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightRegion {
    /// Inside the dispatch sphere of a contact ball.
    Ball { contact: usize, wedge: Wedge },
    /// In the interface band, outside every ball.
    InterfaceBand,
    /// In the wall band, outside balls and interface band.
    BoundaryBand,
    /// Saturated at -+1 by phase.
    Bulk,
}

/// The transported weight for one scene, sharing the calibration's
/// certified radii and ribbon scale.
#[derive(Debug, Clone)]
pub struct WeightField {
    scene: Scene,
    radii: LocalizationRadii,
    delta: f64,
    band: f64,
}

impl WeightField {
    /// Builds the weight on the scales the calibration certified, then
    /// certifies the weight's own seams: the truncation profiles must be
    /// saturated wherever a band crosses a contact-ball exit sphere off
    /// the matching wedge, and the wall band outside the balls must stay
    /// clear of the interface band.
    pub fn new(cal: &GlobalCalibration) -> Result<Self, Error> {
        let scene = cal.scene().clone();
        let radii = cal.radii().clone();
        let scale = cal.ribbon_width();

        if !saturated_at_ball_exits(&scene, &radii, scale)? {
            return Err(Error::DegenerateGeometry(
                "a truncation profile is still live where a band crosses a contact-ball \
                 exit sphere; the ribbon scale is too coarse for this geometry"
                    .into(),
            ));
        }

        let rc_min = radii
            .r_hat_contact
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let mut band = (BAND_FACTOR * rc_min)
            .min(0.95 * radii.r_int)
            .min(0.95 * radii.r_bd);
        while !wall_band_clears_interface(&scene, &radii, band)? {
            band *= 0.8;
            if band < BAND_FLOOR_FACTOR * scale {
                return Err(Error::DegenerateGeometry(
                    "no wall-band width separates the wall from the interface outside the \
                     contact balls"
                        .into(),
                ));
            }
        }

        Ok(WeightField { scene, radii, delta: cal.delta(), band })
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    /// Truncation scale of both profiles, `delta * r_hat`.
    pub fn scale(&self) -> f64 {
        self.delta * self.radii.r_hat
    }

    /// Half-width of the interface and wall bands.
    pub fn band(&self) -> f64 {
        self.band
    }

    /// Freezes the contact frames at one time.
    pub fn slice(&self, t: f64) -> Result<WeightSlice<'_>, Error> {
        let mut frames = self.scene.contacts(t)?;
        for (e, f) in frames.iter_mut().enumerate() {
            f.r_c = self.radii.r_contact[e];
            f.r_hat_c = self.radii.r_hat_contact[e];
        }
        Ok(WeightSlice { field: self, t, frames })
    }

    /// One-off evaluation; batch work should hold a slice.
    pub fn theta_weight(&self, p: Vec2, t: f64) -> Result<ScalarJet, Error> {
        self.slice(t)?.theta_weight(p)
    }
}

/// The weight frozen at one time slice.
pub struct WeightSlice<'a> {
    field: &'a WeightField,
    pub t: f64,
    frames: Vec<crate::geometry::ContactFrame>,
}

/// theta_bar(s / scale) with jets, by the chain rule.
fn truncate(s: ScalarJet, scale: f64) -> ScalarJet {
    let u = s.scale(1.0 / scale);
    let (v, d) = theta_bar(u.v);
    u.chain(v, d)
}

impl WeightSlice<'_> {
    pub fn frames(&self) -> &[crate::geometry::ContactFrame] {
        &self.frames
    }

    pub fn theta_weight(&self, p: Vec2) -> Result<ScalarJet, Error> {
        Ok(self.eval(p)?.1)
    }

    pub fn eval(&self, p: Vec2) -> Result<(WeightRegion, ScalarJet), Error> {
        for (k, f) in self.frames.iter().enumerate() {
            if (p - f.c).norm() <= f.r_hat_c {
                let w = f.classify(p);
                return Ok((WeightRegion::Ball { contact: k, wedge: w }, self.in_ball(k, w, p)?));
            }
        }
        self.banded(p)
    }

    /// The region dispatch outside the contact balls. The interface band
    /// is asked first, matching the construction's precedence; the bands
    /// are certified not to overlap out here, so the order only settles
    /// points that neither band claims.
    fn banded(&self, p: Vec2) -> Result<(WeightRegion, ScalarJet), Error> {
        if let Some(v) = self.interface_band(p)? {
            return Ok((WeightRegion::InterfaceBand, v));
        }
        let s_bd = self.field.scene.boundary.signed_dist(p);
        if s_bd.abs() < self.field.band {
            let phase = self.field.scene.family.phase_side(p, self.t);
            return Ok((WeightRegion::BoundaryBand, self.boundary_aux(p, phase)));
        }
        let phase = self.field.scene.family.phase_side(p, self.t);
        Ok((WeightRegion::Bulk, ScalarJet::constant(-phase)))
    }

    /// Interface-band candidate: the truncated signed interface distance,
    /// when the point is inside the band. An extended chart inside the
    /// domain means the interface leaves the region where the
    /// construction is defined; outside the domain the smooth
    /// continuation is fine (finite-difference stencils poke there).
    fn interface_band(&self, p: Vec2) -> Result<Option<ScalarJet>, Error> {
        match self.field.scene.interface_chart(p, self.t) {
            Ok(ch) => {
                if ch.s.v.abs() >= self.field.band {
                    return Ok(None);
                }
                if ch.extended && self.field.scene.boundary.contains(p) {
                    return Err(Error::CalibrationDomainMiss(format!(
                        "interface-band weight on an extended chart at ({:.6}, {:.6}), t = {:.6}",
                        p.x, p.y, self.t
                    )));
                }
                Ok(Some(truncate(ch.s, self.field.scale()).neg()))
            }
            Err(Error::OutsideTubularBand { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// The interface-adapted candidate, unconditionally (wedge formulas
    /// need it whether or not the band would claim the point).
    fn interface_aux(&self, p: Vec2) -> Result<ScalarJet, Error> {
        let ch = self.field.scene.interface_chart(p, self.t)?;
        if ch.extended && self.field.scene.boundary.contains(p) {
            return Err(Error::CalibrationDomainMiss(format!(
                "contact-wedge weight on an extended chart at ({:.6}, {:.6}), t = {:.6}",
                p.x, p.y, self.t
            )));
        }
        Ok(truncate(ch.s, self.field.scale()).neg())
    }

    /// The wall-adapted candidate: the truncated wall distance, signed so
    /// the weight is negative on the positive-phase side. The closed-form
    /// jet avoids the chart's band guard (callers stay away from the
    /// center, where this is singular).
    fn boundary_aux(&self, p: Vec2, phase: f64) -> ScalarJet {
        let r = p.norm();
        let s = ScalarJet { v: self.field.scene.boundary.radius - r, dx: -p / r, dt: 0.0 };
        truncate(s, self.field.scale()).scale(-phase)
    }

    fn in_ball(&self, k: usize, wedge: Wedge, p: Vec2) -> Result<ScalarJet, Error> {
        let f = &self.frames[k];
        match wedge {
            Wedge::Interface => self.interface_aux(p),
            Wedge::BoundaryPlus => Ok(self.boundary_aux(p, 1.0)),
            Wedge::BoundaryMinus => Ok(self.boundary_aux(p, -1.0)),
            Wedge::BlendPlus | Wedge::BlendMinus => {
                let (side, sign) = if wedge == Wedge::BlendPlus { (1, 1.0) } else { (0, -1.0) };
                let lam = interp_lambda(f, p, side)?;
                let vi = self.interface_aux(p)?;
                let vb = self.boundary_aux(p, sign);
                Ok(lam.mul(vi).add(ScalarJet::constant(1.0).sub(lam).mul(vb)))
            }
            Wedge::OutsideBall => Err(Error::CalibrationDomainMiss(format!(
                "wedge formula requested outside the contact ball at ({:.6}, {:.6})",
                p.x, p.y
            ))),
        }
    }
}

/// Both truncation profiles must have saturated wherever a contact-ball
/// exit sphere leaves the matching wedge: off the interface cone the
/// interface profile, and off the wall wedges (i.e. in the blend range)
/// the wall profile. Where the sphere crosses the wall wedges the inside
/// and outside formulas coincide, so the wall profile may stay live
/// there — but then the interface band must not reach in and steal the
/// point, which is the third condition.
fn saturated_at_ball_exits(
    scene: &Scene,
    radii: &LocalizationRadii,
    scale: f64,
) -> Result<bool, Error> {
    let horizon = scene.horizon();
    for &t in &[0.0, 0.5 * horizon, horizon] {
        let mut frames = scene.contacts(t)?;
        for (e, f) in frames.iter_mut().enumerate() {
            f.r_c = radii.r_contact[e];
            f.r_hat_c = radii.r_hat_contact[e];
            for k in 0..=48 {
                let phi = (FRAC_PI_6 + 0.005) + (PI - FRAC_PI_6 - 0.005) * k as f64 / 48.0;
                for sgn in [-1.0, 1.0] {
                    let dir = phi.cos() * f.n_bd + sgn * phi.sin() * f.n_axis;
                    let p = f.c + f.r_hat_c * dir;
                    if !scene.boundary.contains(p) {
                        continue;
                    }
                    if dist_to_curve(&scene.family, p, t, DIST_SCAN) + 1e-12 < scale {
                        return Ok(false);
                    }
                    if phi <= FRAC_PI_3 - 0.005
                        && scene.boundary.signed_dist(p) + 1e-12 < scale
                    {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Outside the balls, points of the wall band must be out of reach of
/// the interface band, else the dispatch would hand a wall-hugging point
/// to the interface formula. Sweeps the wall band on a global grid plus
/// extra stations just past each ball exit, where the clearance is
/// tightest.
fn wall_band_clears_interface(
    scene: &Scene,
    radii: &LocalizationRadii,
    band: f64,
) -> Result<bool, Error> {
    let horizon = scene.horizon();
    let r_dom = scene.boundary.radius;
    for &t in &[0.0, 0.5 * horizon, horizon] {
        let mut frames = scene.contacts(t)?;
        for (e, f) in frames.iter_mut().enumerate() {
            f.r_c = radii.r_contact[e];
            f.r_hat_c = radii.r_hat_contact[e];
        }
        let mut stations: Vec<f64> = (0..128).map(|k| -PI + 2.0 * PI * k as f64 / 128.0).collect();
        for f in &frames {
            let theta_c = f.c.y.atan2(f.c.x);
            let cross = 2.0 * (0.5 * f.r_hat_c / r_dom).min(1.0).asin();
            for m in [1.02, 1.1, 1.3, 1.6] {
                stations.push(theta_c + m * cross);
                stations.push(theta_c - m * cross);
            }
        }
        for &theta in &stations {
            let w = scene.boundary.at_angle(theta);
            for frac in [0.08, 0.5, 0.92] {
                let q = w * (1.0 - frac * band / r_dom);
                if frames.iter().any(|f| (q - f.c).norm() <= f.r_hat_c) {
                    continue;
                }
                if dist_to_curve(&scene.family, q, t, DIST_SCAN) < band * (1.0 + 1e-9) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Sample budget for [`verify_weight_properties`].
#[derive(Debug, Clone)]
pub struct WeightSamples {
    /// Random points for the sign-pattern census.
    pub sign: usize,
    /// Random points feeding the lower-bound and transport constants.
    pub field: usize,
    /// Interface and wall ray feet for the targeted near-zero sweeps.
    pub ray_feet: usize,
    /// Offsets per ray.
    pub ray_dists: usize,
    pub seed: u64,
}

impl Default for WeightSamples {
    fn default() -> Self {
        WeightSamples { sign: 10_000, field: 1500, ray_feet: 10, ray_dists: 10, seed: 11 }
    }
}

/// Measured constants and defects of one weight field.
#[derive(Debug, Clone)]
pub struct WeightReport {
    /// Sup of min(interface distance, wall distance, 1) / |weight|.
    pub c_lower_bound: f64,
    /// Sup of |advective derivative| / |weight| over the structured
    /// sweeps (deterministic rays and wedge scans).
    pub c_transport: f64,
    /// Same constant with the offset density halved, for the
    /// refinement-stability comparison.
    pub c_transport_coarse: f64,
    /// Sup of the raw advective derivative (zero for static scenes).
    pub dt_material_sup: f64,
    pub sign_checked: usize,
    pub sign_failures: usize,
    /// Worst forced-branch mismatch across wedge rays and ball spheres.
    pub seam_sup: f64,
    /// Decay order of |interface candidate - wall candidate| against the
    /// smaller of the two distances, on the interpolation wedges.
    pub compat_fit: OrderFit,
    /// Sup of that difference over the smaller distance.
    pub compat_sup_ratio: f64,
    pub samples: usize,
}

/// Checks the defining properties of the transported weight on a scene:
/// the sign pattern against the analytic phase, the two fitted constants
/// (distance lower bound and advective-derivative control), seam
/// tightness by forced-branch evaluation, and the compatibility of the
/// two candidates on the interpolation wedges.
pub fn verify_weight_properties(
    field: &WeightField,
    samples: &WeightSamples,
) -> Result<WeightReport, Error> {
    let scene = field.scene();
    let horizon = scene.horizon();
    let times = [0.0, 0.5 * horizon, horizon];
    let scale = field.scale();

    let mut rng = rng_from_seed(samples.seed);
    let mut c_lower: f64 = 0.0;
    let mut c_transport: f64 = 0.0;
    let mut c_transport_coarse: f64 = 0.0;
    let mut dt_sup: f64 = 0.0;
    let mut sign_checked = 0usize;
    let mut sign_failures = 0usize;
    let mut seam_sup: f64 = 0.0;
    let mut compat_pool: Vec<(f64, f64)> = Vec::new();
    let mut compat_ratio: f64 = 0.0;
    let mut total = 0usize;

    for &t in &times {
        let slice = field.slice(t)?;

        // sign census: cheap, so it gets the big budget
        let per_time = samples.sign / times.len();
        let mut kept = 0;
        while kept < per_time {
            let p = scene.boundary.radius * sample_unit_disk(&mut rng);
            let phase = scene.family.phase_side(p, t);
            if phase == 0.0 {
                continue;
            }
            let v = match slice.theta_weight(p) {
                Ok(v) => v.v,
                Err(Error::AtContactPoint { .. }) => continue,
                Err(e) => return Err(e),
            };
            sign_checked += 1;
            if v * phase >= 0.0 {
                sign_failures += 1;
            }
            kept += 1;
        }

        // Pooled ratio samples: random field points, then targeted rays
        // toward both zero sets and sweeps through the contact balls.
        // The transport constant is estimated from the structured sweeps
        // alone — a sup over random scatter never converges under
        // refinement, while the deterministic sweeps do. The coarse pass
        // keeps every ray and both sweep endpoints (the smooth ratio
        // field peaks toward the sweep ends) but halves the interior
        // density, so the two-resolution comparison measures genuine
        // grid convergence. None = random, Some(true) = coarse member.
        let coarse_member = |i: usize, n: usize| i == 0 || i + 1 == n || i % 2 == 0;
        let mut probes: Vec<(Vec2, Option<bool>)> = Vec::new();
        let mut kept = 0;
        while kept < samples.field / times.len() {
            let p = scene.boundary.radius * sample_unit_disk(&mut rng);
            probes.push((p, None));
            kept += 1;
        }
        let (dom_a, dom_b) = scene.family.domain();
        let dom_len = dom_b - dom_a;
        for rho in linspace(dom_a + 0.08 * dom_len, dom_b - 0.08 * dom_len, samples.ray_feet) {
            let foot = scene.family.point(rho, t);
            let n = crate::geometry::curve_frames(&scene.family, rho, t).0;
            for (di, &d) in log_spaced(1e-4 * scale, 1.5 * scale, samples.ray_dists).iter().enumerate() {
                for sgn in [-1.0, 1.0] {
                    probes.push((foot + sgn * d * n, Some(coarse_member(di, samples.ray_dists))));
                }
            }
        }
        for k in 0..samples.ray_feet {
            let w = scene.boundary.at_angle(-PI + 2.0 * PI * (k as f64 + 0.31) / samples.ray_feet as f64);
            for (di, &d) in log_spaced(1e-4 * scale, 1.5 * scale, samples.ray_dists).iter().enumerate() {
                probes.push((w * (1.0 - d / scene.boundary.radius), Some(coarse_member(di, samples.ray_dists))));
            }
        }
        for f in slice.frames() {
            for phi in [-1.2f64, -0.9, -0.7, -0.45, -0.3, 0.3, 0.45, 0.7, 0.9, 1.2] {
                let dir = phi.cos() * f.n_bd + phi.sin() * f.n_axis;
                for (ri, &r) in log_spaced(1e-3 * f.r_hat_c, 0.95 * f.r_hat_c, 8).iter().enumerate() {
                    probes.push((f.c + r * dir, Some(coarse_member(ri, 8))));
                }
            }
        }

        for &(p, transport) in &probes {
            if !scene.boundary.contains(p) {
                continue;
            }
            let v = match slice.theta_weight(p) {
                Ok(v) => v,
                Err(Error::AtContactPoint { .. }) => continue,
                Err(e) => return Err(e),
            };
            total += 1;
            let d_int = dist_to_curve(&scene.family, p, t, DIST_SCAN);
            let d_bd = scene.boundary.signed_dist(p).abs();
            let q = d_int.min(d_bd).min(1.0);
            if v.v.abs() < 1e-14 {
                if q > 1e-9 {
                    c_lower = f64::INFINITY;
                }
                continue;
            }
            c_lower = c_lower.max(q / v.v.abs());
            let vel = scene.velocity.eval(p, t);
            let adv = v.material(vel).abs();
            dt_sup = dt_sup.max(adv);
            if let Some(coarse) = transport {
                c_transport = c_transport.max(adv / v.v.abs());
                if coarse {
                    c_transport_coarse = c_transport_coarse.max(adv / v.v.abs());
                }
            }
        }

        // compatibility of the two candidates on the interpolation
        // wedges, below the saturation radius so the comparison is live
        for (k, f) in slice.frames().iter().enumerate() {
            let m = (0.95 * f.r_hat_c).min(1.05 * scale);
            for (side, sign) in [(0usize, -1.0f64), (1, 1.0)] {
                for df in [0.12, 0.5, 0.88] {
                    let phi = sign * (FRAC_PI_6 + df * (FRAC_PI_3 - FRAC_PI_6));
                    let dir = phi.cos() * f.n_bd + phi.sin() * f.n_axis;
                    for &r in &log_spaced(1e-3 * m, m, samples.ray_dists) {
                        let p = f.c + r * dir;
                        if !scene.boundary.contains(p) {
                            continue;
                        }
                        let vi = slice.interface_aux(p)?;
                        let vb = slice.boundary_aux(p, sign);
                        let d_int = dist_to_curve(&scene.family, p, t, DIST_SCAN);
                        let d_bd = scene.boundary.signed_dist(p).abs();
                        let d = d_int.min(d_bd);
                        let diff = (vi.v - vb.v).abs();
                        compat_pool.push((d, diff));
                        if d > 1e-12 {
                            compat_ratio = compat_ratio.max(diff / d);
                        }
                        let _ = (k, side);
                    }
                }
            }
        }

        seam_sup = seam_sup.max(seam_defect(&slice)?);
    }

    Ok(WeightReport {
        c_lower_bound: c_lower,
        c_transport,
        c_transport_coarse,
        dt_material_sup: dt_sup,
        sign_checked,
        sign_failures,
        seam_sup,
        compat_fit: order_fit(&compat_pool, 1e-13),
        compat_sup_ratio: compat_ratio,
        samples: total,
    })
}

/// Forced-branch seam probe: evaluates both adjacent formulas at the
/// same point on every wedge ray and on each ball's dispatch sphere and
/// returns the worst disagreement.
fn seam_defect(slice: &WeightSlice<'_>) -> Result<f64, Error> {
    let scene = slice.field.scene();
    let mut worst: f64 = 0.0;
    for (k, f) in slice.frames.iter().enumerate() {
        for side in [0usize, 1] {
            let (blend, wall) = if side == 1 {
                (Wedge::BlendPlus, Wedge::BoundaryPlus)
            } else {
                (Wedge::BlendMinus, Wedge::BoundaryMinus)
            };
            let pairs = [
                (f.x_int[side], Wedge::Interface, blend),
                (f.x_blend[side], blend, wall),
            ];
            for (ray, wa, wb) in pairs {
                for frac in [0.25, 0.55, 0.85] {
                    let p = f.c + frac * f.r_hat_c * ray;
                    if !scene.boundary.contains(p) {
                        continue;
                    }
                    let a = slice.in_ball(k, wa, p)?;
                    let b = slice.in_ball(k, wb, p)?;
                    worst = worst.max((a.v - b.v).abs());
                }
            }
        }
        for j in 0..=32 {
            let phi = -PI + 2.0 * PI * j as f64 / 32.0;
            let dir = phi.cos() * f.n_bd + phi.sin() * f.n_axis;
            let p = f.c + f.r_hat_c * dir;
            if !scene.boundary.contains(p) {
                continue;
            }
            let a = slice.in_ball(k, f.classify(p), p)?;
            let b = slice.banded(p)?.1;
            worst = worst.max((a.v - b.v).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec2;
    use crate::numerics::{d1_central4, grad4};
    use crate::scene::SceneSpec;
    use approx::assert_relative_eq;

    fn scene_from(toml: &str) -> Scene {
        toml::from_str::<SceneSpec>(toml).unwrap().build().unwrap()
    }

    fn rigid_diameter() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            horizon = 1.0
            [domain]
            kind = "disk"
            [interface]
            kind = "diameter"
            angle = 1.5707963267948966
            [velocity]
            kind = "rigid"
            omega = 1.0
            "#,
        )
    }

    fn sheared_diameter() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            horizon = 0.8
            [domain]
            kind = "disk"
            [interface]
            kind = "diameter"
            angle = 0.9
            [velocity]
            kind = "radial-shear"
            omega = 0.7
            beta = 0.4
            "#,
        )
    }

    fn static_arc() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            horizon = 1.0
            [domain]
            kind = "disk"
            [interface]
            kind = "orthogonal-arc"
            radius = 0.75
            "#,
        )
    }

    fn field_for(scene: &Scene) -> WeightField {
        let cal = GlobalCalibration::new(scene).unwrap();
        WeightField::new(&cal).unwrap()
    }

    fn small_budget() -> WeightSamples {
        WeightSamples { sign: 900, field: 300, ray_feet: 6, ray_dists: 7, seed: 11 }
    }

    #[test]
    fn scales_track_the_calibration() {
        let scene = rigid_diameter();
        let cal = GlobalCalibration::new(&scene).unwrap();
        let field = WeightField::new(&cal).unwrap();
        assert_eq!(field.scale(), cal.ribbon_width());
        assert!(field.band() > BAND_FLOOR_FACTOR * field.scale());
        let rc = cal.radii().r_hat_contact.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(field.band() <= BAND_FACTOR * rc + 1e-15);
    }

    #[test]
    fn vanishes_on_the_interface_and_the_wall() {
        let field = field_for(&rigid_diameter());
        let slice = field.slice(0.4).unwrap();
        let scene = field.scene();
        let (a, b) = scene.family.domain();
        for rho in linspace(a, b, 17) {
            let p = scene.family.point(rho, 0.4);
            assert!(slice.theta_weight(p).unwrap().v.abs() < 1e-10, "on-interface at {rho}");
        }
        for k in 0..24 {
            let p = scene.boundary.at_angle(0.13 + 2.0 * PI * k as f64 / 24.0);
            assert!(slice.theta_weight(p).unwrap().v.abs() < 1e-10, "on-wall at {k}");
        }
    }

    #[test]
    fn identity_branch_frozen_values() {
        // vertical diameter at t = 0: positive phase is the right half;
        // on the identity branch the weight is exactly -s/scale
        let field = field_for(&rigid_diameter());
        let slice = field.slice(0.0).unwrap();
        let w = field.scale();

        let (region, v) = slice.eval(vec2(0.25 * w, -0.15)).unwrap();
        assert_eq!(region, WeightRegion::InterfaceBand);
        assert_relative_eq!(v.v, -0.25, epsilon = 1e-14);
        assert_relative_eq!(v.dx.x, -1.0 / w, epsilon = 1e-12);
        assert_relative_eq!(v.dx.y, 0.0, epsilon = 1e-12);

        let (_, m) = slice.eval(vec2(-0.25 * w, -0.15)).unwrap();
        assert_relative_eq!(m.v, 0.25, epsilon = 1e-14);

        // wall band, positive phase: same value from the wall distance
        let (region, v) = slice.eval(vec2(1.0 - 0.25 * w, 0.0)).unwrap();
        assert_eq!(region, WeightRegion::BoundaryBand);
        assert_relative_eq!(v.v, -0.25, epsilon = 1e-14);
        let (_, m) = slice.eval(vec2(-(1.0 - 0.25 * w), 0.0)).unwrap();
        assert_relative_eq!(m.v, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn bulk_values_saturate_by_phase() {
        let field = field_for(&rigid_diameter());
        let slice = field.slice(0.0).unwrap();
        let (region, v) = slice.eval(vec2(0.5, 0.0)).unwrap();
        assert_eq!(region, WeightRegion::Bulk);
        assert_eq!(v.v, -1.0);
        assert_eq!(v.dx.norm(), 0.0);
        assert_eq!(v.dt, 0.0);
        let (_, m) = slice.eval(vec2(-0.5, 0.2)).unwrap();
        assert_eq!(m.v, 1.0);
    }

    #[test]
    fn wedge_rays_and_sphere_seams_are_tight() {
        for scene in [rigid_diameter(), static_arc()] {
            let field = field_for(&scene);
            for t in [0.0, 0.6] {
                let slice = field.slice(t).unwrap();
                let worst = seam_defect(&slice).unwrap();
                assert!(worst < 1e-8, "seam jump {worst} at t = {t}");
            }
        }
    }

    #[test]
    fn rigid_rotation_transports_the_weight_exactly() {
        let field = field_for(&rigid_diameter());
        let scene = field.scene();
        for t in [0.0, 0.35, 0.8] {
            let slice = field.slice(t).unwrap();
            for k in 0..60 {
                let p = 0.97 * scene.boundary.at_angle(2.0 * PI * k as f64 / 60.0 + 0.05)
                    * ((k % 10) as f64 * 0.1 + 0.04).min(1.0);
                if !scene.boundary.contains(p) {
                    continue;
                }
                let Ok(v) = slice.theta_weight(p) else { continue };
                let adv = v.material(scene.velocity.eval(p, t));
                assert!(adv.abs() < 1e-9, "advective derivative {adv} at ({}, {})", p.x, p.y);
            }
        }
    }

    #[test]
    fn static_scene_weight_is_time_independent() {
        let field = field_for(&static_arc());
        let a = field.slice(0.0).unwrap();
        let b = field.slice(1.0).unwrap();
        for p in [vec2(0.6, 0.0), vec2(0.9, 0.1), vec2(0.77, 0.55), vec2(-0.3, 0.4)] {
            let va = a.theta_weight(p).unwrap();
            let vb = b.theta_weight(p).unwrap();
            assert_relative_eq!(va.v, vb.v, epsilon = 1e-12);
            assert!(va.dt.abs() < 1e-12);
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let scene = sheared_diameter();
        let field = field_for(&scene);
        let t = 0.45;
        let slice = field.slice(t).unwrap();
        let w = field.scale();
        let top = slice.frames()[1].clone();
        let blend_dir = 0.7f64.cos() * top.n_bd + 0.7f64.sin() * top.n_axis;
        let ch = scene.interface_chart(vec2(0.0, 0.0), t).unwrap();
        let n = ch.n.v;
        let probes = [
            0.3 * ch.p.v + 0.2 * w * n,  // identity branch
            0.3 * ch.p.v + 0.8 * w * n,  // transition branch
            0.96 * scene.boundary.at_angle(1.0 + top.c.y.atan2(top.c.x)), // wall band
            top.c + 0.45 * top.r_hat_c * blend_dir, // interpolation wedge
        ];
        for p in probes {
            let v = slice.theta_weight(p).unwrap();
            let g = grad4(|q| slice.theta_weight(q).unwrap().v, p, 1e-5);
            let dt = d1_central4(|s| field.theta_weight(p, s).unwrap().v, t, 1e-5);
            assert!(
                (v.dx - g).norm() < 1e-5 * (1.0 + g.norm()),
                "gradient mismatch at ({}, {}): jet {:?} fd {:?}",
                p.x,
                p.y,
                v.dx,
                g
            );
            assert!(
                (v.dt - dt).abs() < 1e-5 * (1.0 + dt.abs()),
                "time mismatch at ({}, {}): jet {} fd {}",
                p.x,
                p.y,
                v.dt,
                dt
            );
        }
    }

    #[test]
    fn rigid_report_is_clean() {
        let field = field_for(&rigid_diameter());
        let report = verify_weight_properties(&field, &small_budget()).unwrap();
        assert_eq!(report.sign_failures, 0);
        assert!(report.sign_checked >= 900);
        // rigidly transported: the advective derivative vanishes
        assert!(report.dt_material_sup < 1e-9, "dt sup {}", report.dt_material_sup);
        assert!(report.c_transport < 1e-6, "c_transport {}", report.c_transport);
        // the identity branch pins the lower-bound constant at the scale
        assert!(
            report.c_lower_bound >= 0.99 * field.scale() && report.c_lower_bound <= 1.0,
            "c_lower {} vs scale {}",
            report.c_lower_bound,
            field.scale()
        );
        assert!(report.seam_sup < 1e-8);
        assert!(
            report.compat_fit.passes(0.9),
            "compat {}",
            report.compat_fit.describe()
        );
        assert!(report.compat_sup_ratio.is_finite());
    }

    #[test]
    fn sheared_report_bounds_the_advective_derivative() {
        let field = field_for(&sheared_diameter());
        let report = verify_weight_properties(&field, &small_budget()).unwrap();
        assert_eq!(report.sign_failures, 0);
        assert!(report.dt_material_sup > 1e-4, "shear should move the weight");
        assert!(report.c_transport.is_finite() && report.c_transport > 0.0);
        assert!(report.c_transport < 50.0, "c_transport {}", report.c_transport);
        // halving the offset density may only move the constant a little
        let gap = report.c_transport - report.c_transport_coarse;
        assert!(
            gap <= 0.2 * report.c_transport + 1e-9,
            "refinement moved the constant from {} to {}",
            report.c_transport_coarse,
            report.c_transport
        );
        assert!(report.compat_fit.passes(0.9), "{}", report.compat_fit.describe());
        assert!(report.seam_sup < 1e-8, "seam {}", report.seam_sup);
    }

    #[test]
    fn band_certification_rejects_absurd_widths() {
        let scene = rigid_diameter();
        let cal = GlobalCalibration::new(&scene).unwrap();
        let field = WeightField::new(&cal).unwrap();
        assert!(wall_band_clears_interface(&scene, cal.radii(), field.band()).unwrap());
        assert!(!wall_band_clears_interface(&scene, cal.radii(), 0.6).unwrap());
    }

    #[test]
    fn points_just_past_the_wall_still_evaluate() {
        let field = field_for(&rigid_diameter());
        let slice = field.slice(0.2).unwrap();
        // finite-difference stencils poke past the wall; the weight keeps
        // evaluating smoothly out there
        let v = slice.theta_weight(vec2(0.3, (1.0f64 - 0.09f64).sqrt() + 2e-5)).unwrap();
        assert!(v.v.abs() <= 1.0 + 1e-12);
    }
}
