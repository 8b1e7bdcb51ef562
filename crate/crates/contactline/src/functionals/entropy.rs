//! The error functionals: interface error of a varifold against the
//! calibration, its decomposition, the kinetic mismatch, the bulk error
//! against the transported weight, and the tilt/distance quantities the
//! interface error controls.

use crate::calibration::CalibrationSlice;
use crate::error::Error;
use crate::functionals::disk::disk_integral;
use crate::functionals::fields::FlowField;
use crate::functionals::phase::PhaseState;
use crate::functionals::varifold::{compatibility_residual, DiscreteVarifoldSlice};
use crate::geometry::{dist_to_curve, InterfaceFamily};
use crate::math::{rotation, Vec2};
use crate::numerics::KahanSum;
use crate::scene::Scene;
use crate::weights::WeightSlice;

fn check_times(a: f64, b: f64, what: &str) -> Result<(), Error> {
    if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
        return Err(Error::FixtureInconsistent(format!(
            "{what}: time slices disagree ({a} vs {b})"
        )));
    }
    Ok(())
}

/// Interface error of a varifold relative to the calibrated comparison
/// interface, with its decomposition. Every field already carries the
/// surface-tension factor.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceError {
    /// σ(total varifold mass − ∫ n·ξ over the phase boundary).
    pub total: f64,
    /// The same error written against the varifold only,
    /// σ ∫ (1 − s·ξ) dV — agrees with `total` whenever the varifold is
    /// compatible with the phase boundary (ξ is wall-tangential, so
    /// wall atoms cannot break the agreement).
    pub from_pairing: f64,
    /// σ × mass sitting on the wall.
    pub wall_mass: f64,
    /// σ × interior mass in excess of the phase boundary.
    pub multiplicity_defect: f64,
    /// σ ∫ (1 − n·ξ) over the phase boundary.
    pub bv_part: f64,
    /// |total − (wall_mass + multiplicity_defect + bv_part)| — zero in
    /// exact arithmetic whenever the atoms' backing masses total the
    /// perimeter.
    pub decomposition_defect: f64,
    /// |total − from_pairing|.
    pub pairing_defect: f64,
    /// Worst tangential-field compatibility defect of the varifold
    /// against the phase boundary.
    pub compat_residual: f64,
}

pub fn interface_error(
    phase: &PhaseState,
    varifold: &DiscreteVarifoldSlice,
    cal: &CalibrationSlice,
    sigma: f64,
) -> Result<InterfaceError, Error> {
    check_times(phase.t, cal.t, "interface error")?;
    check_times(phase.t, varifold.t, "interface error")?;

    let mut paired = KahanSum::new();
    let mut bv_part = KahanSum::new();
    for nd in &phase.interface {
        let xi = cal.xi(nd.x)?.v;
        paired.add(nd.w * nd.n.dot(&xi));
        bv_part.add(nd.w * (1.0 - nd.n.dot(&xi)));
    }
    let mut from_pairing = KahanSum::new();
    for a in &varifold.atoms {
        let xi = cal.xi(a.x)?.v;
        from_pairing.add(a.mass * (1.0 - a.s.dot(&xi)));
    }

    let total = sigma * (varifold.total_mass() - paired.value());
    let wall_mass = sigma * varifold.wall_mass();
    let multiplicity_defect = sigma * varifold.interior_excess();
    let bv = sigma * bv_part.value();
    let from_pairing = sigma * from_pairing.value();
    let compat = compatibility_residual(varifold, phase);

    let out = InterfaceError {
        total,
        from_pairing,
        wall_mass,
        multiplicity_defect,
        bv_part: bv,
        decomposition_defect: (total - (wall_mass + multiplicity_defect + bv)).abs(),
        pairing_defect: (total - from_pairing).abs(),
        compat_residual: compat,
    };

    // The two representations are one integration by parts away from
    // each other; their gap is bounded by the compatibility defect, so
    // a larger gap means broken bookkeeping, not a bad varifold.
    let scale = sigma * (varifold.total_mass() + phase.perimeter);
    if out.pairing_defect > (1e-9 + 4.0 * compat) * scale.max(1e-12) {
        return Err(Error::FixtureInconsistent(format!(
            "interface-error representations disagree by {:.3e} with compatibility \
             residual {:.3e} — varifold orientation/mass bookkeeping is inconsistent",
            out.pairing_defect, compat
        )));
    }
    Ok(out)
}

/// Relative entropy report at one time: kinetic part, interface part
/// and their total.
#[derive(Debug, Clone, Copy)]
pub struct EntropyReport {
    pub t: f64,
    pub kinetic: f64,
    pub interface: InterfaceError,
    pub total: f64,
}

/// Total relative entropy: ∫ ½ρ(χ)|u−v|² plus the interface error.
/// `weak_u: None` states the weak velocity IS the scene velocity, and
/// the kinetic part is exactly zero (no quadrature involved).
pub fn relative_entropy(
    phase: &PhaseState,
    varifold: &DiscreteVarifoldSlice,
    cal: &CalibrationSlice,
    weak_u: Option<&dyn FlowField>,
    scene: &Scene,
    rel_tol: f64,
) -> Result<EntropyReport, Error> {
    let t = phase.t;
    let interface = interface_error(phase, varifold, cal, scene.fluids().sigma)?;
    let kinetic = match weak_u {
        None => 0.0,
        Some(u) => {
            let f = scene.fluids();
            let v = disk_integral(phase.boundary().radius, &phase.contact_angles(), rel_tol, |p| {
                let chi = phase.indicator(p);
                let rho = f.rho_plus * chi + f.rho_minus * (1.0 - chi);
                let dv = u.eval(p, t) - scene.velocity.eval(p, t);
                0.5 * rho * dv.norm_squared()
            });
            if !v.is_finite() {
                return Err(Error::FixtureInconsistent(
                    "kinetic-energy quadrature produced a non-finite value".into(),
                ));
            }
            v
        }
    };
    Ok(EntropyReport { t, kinetic, interface, total: kinetic + interface.total })
}

/// Bulk error: ∫ |χ_weak − χ_strong| |ϑ| over the disk.
///
/// The integration runs in a frame rotated to the weak phase's first
/// contact angle. For rigidly co-rotating pairs this makes the whole
/// quadrature decision tree identical across time slices, so the
/// computed value inherits the exact invariance of the continuum one
/// instead of carrying rotation-dependent panel noise.
pub fn bulk_error(
    weak: &PhaseState,
    strong: &PhaseState,
    weights: &WeightSlice,
    rel_tol: f64,
) -> Result<f64, Error> {
    check_times(weak.t, strong.t, "bulk error")?;
    check_times(weak.t, weights.t, "bulk error")?;

    let phi = weak.contact_angles()[0];
    let frame = rotation(phi);
    let mut seeds: Vec<f64> = weak
        .contact_angles()
        .iter()
        .chain(strong.contact_angles().iter())
        .map(|a| a - phi)
        .collect();
    seeds.sort_by(f64::total_cmp);

    let v = disk_integral(weak.boundary().radius, &seeds, rel_tol, |p| {
        let q = frame * p;
        let diff = (weak.indicator(q) - strong.indicator(q)).abs();
        if diff == 0.0 {
            return 0.0;
        }
        match weights.theta_weight(q) {
            Ok(th) => diff * th.v.abs(),
            Err(_) => f64::NAN,
        }
    });
    if !v.is_finite() {
        return Err(Error::CalibrationDomainMiss(
            "transported weight was unavailable inside the bulk-error quadrature".into(),
        ));
    }
    Ok(v)
}

/// Left sides and margins of the interface-error controls: the tilt
/// excesses, the capped-distance bounds with their fitted constant, and
/// the wall-and-multiplicity mass. Margins are (controlling value −
/// left side); all of them should be nonnegative up to roundoff.
#[derive(Debug, Clone, Copy)]
pub struct TiltControls {
    /// σ ∫ ½|n−ξ|² over the phase boundary; controlled by `bv_part`.
    pub bv_tilt: f64,
    pub bv_tilt_margin: f64,
    /// σ ∫ ½|s−ξ|² dV; controlled by the total interface error.
    pub varifold_tilt: f64,
    pub varifold_tilt_margin: f64,
    /// Fitted constant of the capped-distance bounds: the largest C
    /// with |ξ| ≤ 1 − C·min(1, dist²) at every evaluation point.
    pub dist_constant: f64,
    /// σ ∫ min(1, C dist²) over the phase boundary; controlled by
    /// `bv_part`.
    pub bv_dist: f64,
    pub bv_dist_margin: f64,
    /// σ ∫ min(1, C dist²) dV; controlled by the total.
    pub varifold_dist: f64,
    pub varifold_dist_margin: f64,
    /// σ × (wall mass + interior excess); controlled by the total.
    pub multiplicity: f64,
    pub multiplicity_margin: f64,
}

/// Distance scan resolution along the comparison interface.
const DIST_SCAN: usize = 384;

pub fn tilt_excess_controls(
    phase: &PhaseState,
    varifold: &DiscreteVarifoldSlice,
    cal: &CalibrationSlice,
    comparison: &InterfaceFamily,
    sigma: f64,
    ie: &InterfaceError,
) -> Result<TiltControls, Error> {
    let t = phase.t;

    // Fitted constant: 1−|ξ| vanishes quadratically off the comparison
    // interface, so the infimum of (1−|ξ|)/min(1,d²) over the actual
    // evaluation points is positive and makes every capped-distance
    // bound below hold pointwise. Points on the interface itself carry
    // no information (0/0) and are skipped.
    let mut c_fit = f64::INFINITY;
    let mut with_dist: Vec<(Vec2, f64)> = Vec::with_capacity(phase.interface.len());
    for nd in &phase.interface {
        let d = dist_to_curve(comparison, nd.x, t, DIST_SCAN);
        with_dist.push((nd.x, d));
        if d > 1e-7 {
            let xi = cal.xi(nd.x)?.v;
            c_fit = c_fit.min((1.0 - xi.norm()) / d.min(1.0).powi(2));
        }
    }
    let mut atom_dist: Vec<f64> = Vec::with_capacity(varifold.atoms.len());
    for a in &varifold.atoms {
        let d = dist_to_curve(comparison, a.x, t, DIST_SCAN);
        atom_dist.push(d);
        if d > 1e-7 {
            let xi = cal.xi(a.x)?.v;
            c_fit = c_fit.min((1.0 - xi.norm()) / d.min(1.0).powi(2));
        }
    }
    let c = if c_fit.is_finite() { c_fit.max(0.0) } else { 1.0 };

    let mut bv_tilt = KahanSum::new();
    let mut bv_dist = KahanSum::new();
    for (nd, (_, d)) in phase.interface.iter().zip(&with_dist) {
        let xi = cal.xi(nd.x)?.v;
        bv_tilt.add(nd.w * 0.5 * (nd.n - xi).norm_squared());
        bv_dist.add(nd.w * (c * d * d).min(1.0));
    }
    let mut v_tilt = KahanSum::new();
    let mut v_dist = KahanSum::new();
    for (a, d) in varifold.atoms.iter().zip(&atom_dist) {
        let xi = cal.xi(a.x)?.v;
        v_tilt.add(a.mass * 0.5 * (a.s - xi).norm_squared());
        v_dist.add(a.mass * (c * d * d).min(1.0));
    }

    let bv_tilt = sigma * bv_tilt.value();
    let varifold_tilt = sigma * v_tilt.value();
    let bv_dist = sigma * bv_dist.value();
    let varifold_dist = sigma * v_dist.value();
    let multiplicity = ie.wall_mass + ie.multiplicity_defect;

    Ok(TiltControls {
        bv_tilt,
        bv_tilt_margin: ie.bv_part - bv_tilt,
        varifold_tilt,
        varifold_tilt_margin: ie.total - varifold_tilt,
        dist_constant: c,
        bv_dist,
        bv_dist_margin: ie.bv_part - bv_dist,
        varifold_dist,
        varifold_dist_margin: ie.total - varifold_dist,
        multiplicity,
        multiplicity_margin: ie.total - multiplicity,
    })
}
