//! Localization radii: how far the signed-distance charts and the wedge
//! decomposition can be trusted.
//!
//! The existence arguments only say "for sufficiently small radii", so we
//! search for the largest working values by bisection against brute-force
//! sampled certificates:
//!
//! * `r_int` — half-width of the band around the interface on which the
//!   nearest-point map is single-valued (a straight interface accepts any
//!   band, a circular arc stops at its focal radius);
//! * `r_bd` — same for the boundary circle, capped so the level-set
//!   curvature stays bounded on the band;
//! * `r_contact` — radius of the ball around each contact point on which
//!   the wedge decomposition is certified: interface and boundary samples
//!   land in their cones, blend wedges sit on the correct phase side
//!   inside both chart bands, and the distance to the interface dominates
//!   the other two distances on the outer wedges with a reported constant;
//! * `r_hat_contact` — shrunk further (given a norm probe from the
//!   calibration layer) until the blended contact field stays safely
//!   normalizable;
//! * `r_hat` — the global working scale, the minimum of everything above.

use crate::error::Error;
use crate::geometry::boundary::DomainBoundary;
use crate::geometry::contact::{locate_contact_points, ContactFrame, Wedge};
use crate::geometry::curve::{chart_jet, dist_to_curve, ParamCurve};
use crate::geometry::families::InterfaceFamily;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

/// Largest dominance constant accepted before the ball is shrunk.
/// The flat-geometry value is 2 (attained at the interface-cone edge);
/// the headroom absorbs curvature of the actual interface and boundary.
const DOMINANCE_CAP: f64 = 4.0;

/// Sampling density of the brute-force distance queries.
const DIST_SCAN: usize = 512;

#[derive(Debug, Clone)]
pub struct LocalizationRadii {
    pub r_int: f64,
    pub r_bd: f64,
    pub r_contact: Vec<f64>,
    pub r_hat_contact: Vec<f64>,
    /// Achieved constant in the distance-dominance bound on the outer
    /// wedges (sampled supremum).
    pub dominance_constant: f64,
    /// Global working scale; cutoff supports are measured against this.
    pub r_hat: f64,
}

impl LocalizationRadii {
    pub fn refresh_global(&mut self) {
        let rc = self
            .r_hat_contact
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        self.r_hat = self.r_int.min(self.r_bd).min(rc);
    }
}

/// Bisection for the largest radius in (0, cap] passing `ok`, to 1e-3
/// relative resolution. Returns None when nothing positive passes.
fn largest_passing(cap: f64, ok: impl Fn(f64) -> bool) -> Option<f64> {
    if ok(cap) {
        return Some(cap);
    }
    let mut hi = cap;
    let mut lo = cap / 2.0;
    while lo > cap * 1e-6 && !ok(lo) {
        hi = lo;
        lo /= 2.0;
    }
    if lo <= cap * 1e-6 {
        return None;
    }
    while hi - lo > 1e-3 * cap {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Brute-force single-valuedness of the band of half-width w around the
/// curve: offsets along the normal must reproduce their own distance.
fn tube_single_valued(curve: &impl ParamCurve, times: &[f64], w: f64) -> bool {
    let (a, b) = curve.domain();
    for &t in times {
        for i in 0..=48 {
            let rho = a + (b - a) * i as f64 / 48.0;
            let g = curve.point(rho, t);
            let d_rho = curve.d_rho(rho, t);
            let q = d_rho.norm();
            if q < 1e-12 {
                return false;
            }
            let tau = curve.orient() / q * d_rho;
            let n = -crate::math::rot90(tau);
            for &frac in &[0.35, 0.7, 1.0] {
                for sgn in [-1.0, 1.0] {
                    let s = sgn * frac * w;
                    let x = g + s * n;
                    let d = dist_to_curve(curve, x, t, DIST_SCAN);
                    if d < s.abs() * (1.0 - 1e-9) - 1e-12 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

struct BallCheck {
    ok: bool,
    dominance: f64,
}

/// Certificate for one contact ball of radius r at one time.
fn contact_ball_check(
    boundary: &DomainBoundary,
    family: &InterfaceFamily,
    frame: &ContactFrame,
    t: f64,
    r: f64,
    r_int: f64,
    r_bd: f64,
) -> BallCheck {
    let fail = BallCheck { ok: false, dominance: f64::INFINITY };
    let mut frame = frame.clone();
    frame.r_c = r;
    let c = frame.c;

    // interface samples inside the ball stay in the interface cone
    let (a, b) = family.domain();
    for i in 0..=256 {
        let rho = a + (b - a) * i as f64 / 256.0;
        let g = family.point(rho, t);
        let dist = (g - c).norm();
        if dist <= r && dist > 1e-12 && frame.classify(g) != Wedge::Interface {
            return fail;
        }
    }

    // boundary samples inside the ball stay in the boundary wedges
    let theta_c = f64::atan2(c.y, c.x);
    let span = 2.0 * (0.5 * r / boundary.radius).min(1.0).asin();
    for k in -16..=16i32 {
        if k == 0 {
            continue;
        }
        let p = boundary.at_angle(theta_c + span * k as f64 / 16.0);
        if (p - c).norm() <= r && !frame.classify(p).is_boundary() {
            return fail;
        }
    }

    // wedge interiors: chart validity, phase side, distance dominance
    let mut phis: Vec<f64> = (0..=24).map(|k| -2.05 + 4.1 * k as f64 / 24.0).collect();
    for e in [FRAC_PI_6, FRAC_PI_3, 2.0 * FRAC_PI_3] {
        phis.push(e + 1e-3);
        phis.push(-e - 1e-3);
        phis.push(e - 1e-3);
        phis.push(-e + 1e-3);
    }
    let mut dominance: f64 = 0.0;
    for &phi in &phis {
        let dir = phi.cos() * frame.n_bd + phi.sin() * frame.n_axis;
        for &frac in &[0.35, 0.65, 0.95] {
            let x = c + frac * r * dir;
            if boundary.signed_dist(x) < 1e-9 {
                continue; // outside the closed domain (or on its boundary)
            }
            let w = frame.classify(x);
            let d_int = dist_to_curve(family, x, t, DIST_SCAN);
            let d_bd = boundary.signed_dist(x).abs();
            let d_c = frac * r;
            match w {
                Wedge::Interface => {
                    // the boundary must stay clear of the interface cone
                    if d_bd < 0.35 * d_c || d_int > 0.98 * r_int {
                        return fail;
                    }
                }
                Wedge::BlendPlus | Wedge::BlendMinus => {
                    if d_int > 0.98 * r_int || d_bd > 0.98 * r_bd {
                        return fail;
                    }
                    // correct phase side
                    let want = if w == Wedge::BlendPlus { 1.0 } else { -1.0 };
                    match chart_jet(family, x, t, r_int) {
                        Ok(ch) if ch.s.v.signum() == want => {}
                        _ => return fail,
                    }
                    dominance = dominance.max(d_c.max(d_bd) / d_int);
                }
                Wedge::BoundaryPlus | Wedge::BoundaryMinus => {
                    if d_bd > 0.98 * r_bd {
                        return fail;
                    }
                    dominance = dominance.max(d_c.max(d_bd) / d_int);
                }
                Wedge::OutsideBall => unreachable!("sample radius stays below r"),
            }
        }
    }
    BallCheck { ok: dominance <= DOMINANCE_CAP, dominance }
}

/// Search the localization radii for a scene, sampling the given times.
///
/// `norm_probe(frame, r)` should return the smallest norm of the blended
/// contact calibration field sampled on the ball of radius r; when given,
/// the per-contact working radii are shrunk until the probe stays >= 0.55
/// (margin over the 1/2 the normalization needs).
pub fn estimate_localization_radii(
    boundary: &DomainBoundary,
    family: &InterfaceFamily,
    times: &[f64],
    angle_tol_deg: f64,
    norm_probe: Option<&dyn Fn(&ContactFrame, f64) -> f64>,
) -> Result<LocalizationRadii, Error> {
    let fallback = [0.0];
    let times = if times.is_empty() { &fallback[..] } else { times };
    let frames_per_time: Vec<Vec<ContactFrame>> = times
        .iter()
        .map(|&t| locate_contact_points(boundary, family, t, None, angle_tol_deg))
        .collect::<Result<_, _>>()?;
    let n_contacts = frames_per_time[0].len();

    let r_int = largest_passing(boundary.radius, |w| tube_single_valued(family, times, w))
        .ok_or_else(|| {
            Error::DegenerateGeometry("no single-valued band around the interface".into())
        })?;

    // the circle chart is single-valued up to the center; the cap keeps
    // 1 - s*H (and with it the level-set curvature) bounded on the band
    let r_bd = largest_passing(0.75 * boundary.radius, |w| {
        tube_single_valued(boundary, times, w)
    })
    .ok_or_else(|| Error::DegenerateGeometry("no single-valued band at the boundary".into()))?;

    let mut r_contact = Vec::with_capacity(n_contacts);
    let mut dominance_constant: f64 = 0.0;
    for e in 0..n_contacts {
        let mut cap = (0.35 * boundary.radius).min(0.95 * r_int).min(0.95 * r_bd);
        for frames in &frames_per_time {
            let sep = (frames[0].c - frames[frames.len() - 1].c).norm();
            if n_contacts > 1 {
                cap = cap.min(0.25 * sep);
            }
            let h = frames[e].h_int.abs();
            if h > 1e-9 {
                cap = cap.min(0.6 / h);
            }
        }
        let ok = |r: f64| {
            times.iter().zip(&frames_per_time).all(|(&t, frames)| {
                contact_ball_check(boundary, family, &frames[e], t, r, r_int, r_bd).ok
            })
        };
        let r = largest_passing(cap, ok).ok_or_else(|| {
            Error::DegenerateGeometry(format!("no admissible ball at contact {e}"))
        })?;
        for (&t, frames) in times.iter().zip(&frames_per_time) {
            let chk = contact_ball_check(boundary, family, &frames[e], t, r, r_int, r_bd);
            dominance_constant = dominance_constant.max(chk.dominance);
        }
        r_contact.push(r);
    }

    let mut r_hat_contact = r_contact.clone();
    if let Some(probe) = norm_probe {
        for e in 0..n_contacts {
            loop {
                let worst = times
                    .iter()
                    .zip(&frames_per_time)
                    .map(|(_, frames)| {
                        let mut f = frames[e].clone();
                        f.r_c = r_contact[e];
                        f.r_hat_c = r_hat_contact[e];
                        probe(&f, r_hat_contact[e])
                    })
                    .fold(f64::INFINITY, f64::min);
                if worst >= 0.55 {
                    break;
                }
                r_hat_contact[e] *= 0.8;
                if r_hat_contact[e] < 1e-3 * boundary.radius {
                    return Err(Error::DegenerateGeometry(format!(
                        "contact field never safely normalizable at contact {e}"
                    )));
                }
            }
        }
    }

    let mut radii = LocalizationRadii {
        r_int,
        r_bd,
        r_contact,
        r_hat_contact,
        dominance_constant,
        r_hat: 0.0,
    };
    radii.refresh_global();
    Ok(radii)
}
