//! Contact-point calibration: expansion blocks anchored where the
//! interface meets the wall, interpolated across the wedge decomposition
//! and normalized.
//!
//! Each block extends the relevant unit field to second order in the
//! corresponding signed distance, and the expansion coefficient is minus
//! the curvature of the *other* hypersurface at the contact point. That
//! specific pairing is what makes the two blocks agree to first order at
//! the contact, keeps the interface block tangent to the wall and the
//! boundary block normal to the interface where they take over from each
//! other, and bounds the blended field away from zero on a quantified
//! ball so that normalization is safe.

use crate::calibration::bulk::ANALYTIC_FLOOR;
use crate::error::Error;
use crate::geometry::{dist_to_curve, ChartJet, ContactFrame, Wedge};
use crate::jet::{length_transport, transport_residual, ScalarJet, VecJet};
use crate::math::Vec2;
use crate::numerics::{log_spaced, order_fit, OrderFit};
use crate::profiles::lambda_tilde;
use crate::scene::Scene;

/// `1 - cos(pi/6)`: the interpolation parameter sweeps `[0, 1]` as a ray
/// direction turns from the interface-cone edge to the blend-wedge edge.
const COS_GAP: f64 = 1.0 - 0.866_025_403_784_438_6;

/// Normalizing a vector shorter than this is refused; on the certified
/// contact balls the blended field stays near unit length, so tripping
/// the guard means the inputs were outside their contract.
const MIN_SAFE_NORM: f64 = 0.5;

/// Curvature coefficients of the two expansion blocks at one contact
/// point, as first-order jets in time (they are spatially constant).
#[derive(Debug, Clone, Copy)]
pub struct ContactBlocks {
    /// Coefficient of the interface block: minus the wall curvature.
    pub alpha_interface: ScalarJet,
    /// Coefficient of the boundary block: minus the interface curvature
    /// at the contact point.
    pub alpha_boundary: ScalarJet,
}

pub fn blocks(frame: &ContactFrame) -> ContactBlocks {
    ContactBlocks {
        alpha_interface: ScalarJet { v: -frame.h_bd, dx: Vec2::zeros(), dt: -frame.h_bd_dt },
        alpha_boundary: ScalarJet { v: -frame.h_int, dx: Vec2::zeros(), dt: -frame.h_int_dt },
    }
}

/// `n + (alpha s) tau - (alpha s)^2 / 2 n` assembled from chart jets.
/// Exactly satisfies `|.|^2 = 1 + (alpha s)^4 / 4`.
fn aux_block(n: VecJet, tau: VecJet, s: ScalarJet, alpha: ScalarJet) -> VecJet {
    let m = alpha.mul(s);
    let head = ScalarJet::constant(1.0).sub(m.mul(m).scale(0.5));
    n.scale_jet(head).add(tau.scale_jet(m))
}

fn interface_block(ch: &ChartJet, frame: &ContactFrame) -> VecJet {
    let tau_loc = ch.tau.scale(frame.sign_tau_int);
    aux_block(ch.n, tau_loc, ch.s, blocks(frame).alpha_interface)
}

fn boundary_block(ch: &ChartJet, frame: &ContactFrame) -> VecJet {
    // Roles swap: the block extends the anchored wall tangent, and the
    // correction turns it toward the inward wall normal.
    let tau_loc = ch.tau.scale(frame.sign_tau_bd);
    aux_block(tau_loc, ch.n, ch.s, blocks(frame).alpha_boundary)
}

/// Second-order extension of the interface normal across the contact
/// ball, curved by the wall.
pub fn xi_aux_interface(
    scene: &Scene,
    frame: &ContactFrame,
    p: Vec2,
    t: f64,
) -> Result<VecJet, Error> {
    Ok(interface_block(&scene.interface_chart(p, t)?, frame))
}

/// Second-order extension of the anchored wall tangent, curved by the
/// interface.
pub fn xi_aux_boundary(
    scene: &Scene,
    frame: &ContactFrame,
    p: Vec2,
    _t: f64,
) -> Result<VecJet, Error> {
    Ok(boundary_block(&scene.boundary_chart(p)?, frame))
}

/// Angular interpolation weight between the two blocks, with exact jets.
///
/// The weight depends on the direction of `p - c` only: it is 1 on the
/// interface-cone edge ray, 0 on the blend-wedge outer ray, and ramps in
/// between through a plateaued smoothstep, so both wedge seams are
/// crossed on a constant stretch.
pub fn interp_lambda(frame: &ContactFrame, p: Vec2, side: usize) -> Result<ScalarJet, Error> {
    let d = p - frame.c;
    let r = d.norm();
    if r < 1e-14 {
        return Err(Error::AtContactPoint { x: p.x, y: p.y });
    }
    let dir = d / r;
    let x = frame.x_int[side];
    let u = x.dot(&dir);
    let grad_u = (x - u * dir) / r;
    let du_dt = frame.x_int_dt(side).dot(&dir) - (x.dot(&frame.dc_dt) - u * dir.dot(&frame.dc_dt)) / r;
    let (lam, dlam) = lambda_tilde((1.0 - u) / COS_GAP);
    let scale = -dlam / COS_GAP;
    Ok(ScalarJet { v: lam, dx: scale * grad_u, dt: scale * du_dt })
}

/// The (unnormalized) contact field for a prescribed wedge label.
///
/// Callers that trust [`ContactFrame::classify`] should use
/// [`xi_hat_contact`]; this entry point exists so seam continuity can be
/// checked by evaluating both adjacent formulas at the same point.
pub fn xi_hat_for_wedge(
    scene: &Scene,
    frame: &ContactFrame,
    p: Vec2,
    t: f64,
    wedge: Wedge,
) -> Result<VecJet, Error> {
    match wedge {
        Wedge::Interface => xi_aux_interface(scene, frame, p, t),
        Wedge::BoundaryPlus | Wedge::BoundaryMinus => xi_aux_boundary(scene, frame, p, t),
        Wedge::BlendPlus | Wedge::BlendMinus => {
            let side = if wedge == Wedge::BlendPlus { 1 } else { 0 };
            let lam = interp_lambda(frame, p, side)?;
            let one_minus = ScalarJet::constant(1.0).sub(lam);
            let a = xi_aux_interface(scene, frame, p, t)?;
            let b = xi_aux_boundary(scene, frame, p, t)?;
            Ok(a.scale_jet(lam).add(b.scale_jet(one_minus)))
        }
        Wedge::OutsideBall => Err(Error::CalibrationDomainMiss(format!(
            "contact field requested at ({}, {}), outside the ball of radius {} at ({}, {})",
            p.x, p.y, frame.r_c, frame.c.x, frame.c.y
        ))),
    }
}

/// Wedge-classified unnormalized contact field.
pub fn xi_hat_contact(
    scene: &Scene,
    frame: &ContactFrame,
    p: Vec2,
    t: f64,
) -> Result<(VecJet, Wedge), Error> {
    let wedge = frame.classify(p);
    Ok((xi_hat_for_wedge(scene, frame, p, t, wedge)?, wedge))
}

pub(crate) fn normalize_guarded(hat: VecJet, p: Vec2) -> Result<VecJet, Error> {
    let norm = hat.v.norm();
    if norm < MIN_SAFE_NORM {
        return Err(Error::NormalizationUnsafe { x: p.x, y: p.y, norm });
    }
    Ok(hat.normalize())
}

/// The normalized contact calibration field on the certified ball.
pub fn xi_contact(scene: &Scene, frame: &ContactFrame, p: Vec2, t: f64) -> Result<VecJet, Error> {
    let (hat, _) = xi_hat_contact(scene, frame, p, t)?;
    normalize_guarded(hat, p)
}

/// Probe for the localization-radius search: the minimal length of the
/// unnormalized contact field over a fan inside the candidate ball.
///
/// A chart failure counts as length 0 so the caller keeps shrinking;
/// certified radii never reach that branch.
pub fn norm_probe(scene: &Scene) -> impl Fn(&ContactFrame, f64) -> f64 + '_ {
    move |frame, r| {
        let mut worst = f64::INFINITY;
        for k in 0..=32 {
            let phi = -2.09 + 4.18 * k as f64 / 32.0;
            let dir = phi.cos() * frame.n_bd + phi.sin() * frame.n_axis;
            for frac in [0.3, 0.55, 0.8, 1.0] {
                let p = frame.c + frac * r * dir;
                if scene.boundary.signed_dist(p) < 1e-9 {
                    continue;
                }
                match xi_hat_contact(scene, frame, p, frame.t) {
                    Ok((hat, _)) => worst = worst.min(hat.v.norm()),
                    Err(_) => return 0.0,
                }
            }
        }
        worst
    }
}

/// Measured properties of the contact calibration across both contact
/// points and the times `{0, T/2, T}`.
#[derive(Debug, Clone)]
pub struct ContactReport {
    /// Decay of the transport residual in the distance to the interface.
    pub transport_fit: OrderFit,
    /// Sup of the advective derivative of `|xi|^2`.
    pub length_material_sup: f64,
    /// Decay of `|xi_bulk - xi_contact|` (first-order compatibility with
    /// the bulk extension away from the wall wedges).
    pub compat_value_fit: OrderFit,
    /// Decay of the component of that mismatch along the bulk normal;
    /// one order better because the fields are unit length.
    pub compat_tilt_fit: OrderFit,
    /// Decay of `|xi_hat_i - xi_hat_b|` toward the contact point.
    pub aux_pair_fit: OrderFit,
    /// Decay of `|1 - |xi_hat_i|^2|` in the interface distance.
    pub aux_length_fit: OrderFit,
    /// Sup of `||xi_hat|^2 - (1 + (alpha s)^4/4)|` over both blocks.
    pub identity_defect_sup: f64,
    /// Sup over the four wedge rays of the jump between the adjacent
    /// branch formulas.
    pub seam_jump_sup: f64,
    /// Sup of the advective derivative of the interpolation weight.
    pub lambda_material_sup: f64,
    /// Min of `|grad lambda| * |p - c|` over the ramp region; positive,
    /// confirming the weight really varies on the dimensionless angle.
    pub lambda_grad_scale_floor: f64,
    pub samples: usize,
}

fn blend_label(side: usize) -> Wedge {
    if side == 1 {
        Wedge::BlendPlus
    } else {
        Wedge::BlendMinus
    }
}

fn boundary_label(side: usize) -> Wedge {
    if side == 1 {
        Wedge::BoundaryPlus
    } else {
        Wedge::BoundaryMinus
    }
}

/// Jump between the normalized branch formulas on the shared wedge rays.
fn seam_jump(scene: &Scene, frame: &ContactFrame, t: f64) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for side in [0usize, 1] {
        for frac in [0.3, 0.6, 0.9] {
            let r = frac * frame.r_c;
            let p = frame.c + r * frame.x_int[side];
            if scene.boundary.contains(p) {
                let a = normalize_guarded(
                    xi_hat_for_wedge(scene, frame, p, t, Wedge::Interface)?,
                    p,
                )?;
                let b =
                    normalize_guarded(xi_hat_for_wedge(scene, frame, p, t, blend_label(side))?, p)?;
                worst = worst.max((a.v - b.v).norm());
            }
            let p = frame.c + r * frame.x_blend[side];
            if scene.boundary.contains(p) {
                let a =
                    normalize_guarded(xi_hat_for_wedge(scene, frame, p, t, blend_label(side))?, p)?;
                let b = normalize_guarded(
                    xi_hat_for_wedge(scene, frame, p, t, boundary_label(side))?,
                    p,
                )?;
                worst = worst.max((a.v - b.v).norm());
            }
        }
    }
    Ok(worst)
}

pub fn verify_contact_properties(
    scene: &Scene,
    dists_per_ray: usize,
) -> Result<ContactReport, Error> {
    let horizon = scene.horizon();
    let times = [0.0, 0.5 * horizon, horizon];

    // Ray directions in contact-frame angle from the wall normal: the
    // first group stays in the interface cone, the second in the blend
    // wedges, the third in the boundary wedges.
    let cone_dirs: [f64; 6] = [-0.49, -0.35, -0.17, 0.17, 0.35, 0.49];
    let blend_dirs: [f64; 6] = [-0.96, -0.79, -0.61, 0.61, 0.79, 0.96];
    let wall_dirs: [f64; 4] = [-1.48, -1.22, 1.22, 1.48];

    let mut transport_pool = Vec::new();
    let mut compat_value_pool = Vec::new();
    let mut compat_tilt_pool = Vec::new();
    let mut pair_pool = Vec::new();
    let mut aux_length_pool = Vec::new();
    let mut length_sup: f64 = 0.0;
    let mut identity_sup: f64 = 0.0;
    let mut seam_sup: f64 = 0.0;
    let mut lambda_material_sup: f64 = 0.0;
    let mut lambda_grad_floor = f64::INFINITY;
    let mut samples = 0usize;

    for &t in &times {
        for frame in &scene.contacts(t)? {
            let radii = log_spaced(8e-3 * frame.r_c, 0.8 * frame.r_c, dists_per_ray);
            for &phi in cone_dirs.iter().chain(&blend_dirs).chain(&wall_dirs) {
                let dir = phi.cos() * frame.n_bd + phi.sin() * frame.n_axis;
                for &r in &radii {
                    let p = frame.c + r * dir;
                    if !scene.boundary.contains(p) {
                        continue;
                    }
                    let (hat, wedge) = xi_hat_contact(scene, frame, p, t)?;
                    let xi = normalize_guarded(hat, p)?;
                    let vel = scene.velocity.eval(p, t);
                    let grad_v = scene.velocity.grad(p, t);
                    let dist = dist_to_curve(&scene.family, p, t, 512);

                    if dist > 0.0 {
                        transport_pool
                            .push((dist, transport_residual(&xi, vel, &grad_v).norm()));
                    }
                    length_sup = length_sup.max(length_transport(&xi, vel).abs());
                    samples += 1;

                    if matches!(
                        wedge,
                        Wedge::Interface | Wedge::BlendPlus | Wedge::BlendMinus
                    ) {
                        let ch = scene.interface_chart(p, t)?;
                        let ia = interface_block(&ch, frame);
                        let alpha = blocks(frame).alpha_interface.v;
                        let target = 1.0 + 0.25 * (alpha * ch.s.v).powi(4);
                        identity_sup = identity_sup.max((ia.norm_sq().v - target).abs());
                        aux_length_pool.push((ch.s.v.abs(), (ia.norm_sq().v - 1.0).abs()));

                        let bulk_xi = ch.n;
                        let gap = bulk_xi.v - xi.v;
                        compat_value_pool.push((dist, gap.norm()));
                        compat_tilt_pool.push((dist, bulk_xi.v.dot(&gap).abs()));
                    }
                    if wedge.is_blend() || wedge.is_boundary() {
                        let ch = scene.boundary_chart(p)?;
                        let ib = boundary_block(&ch, frame);
                        let alpha = blocks(frame).alpha_boundary.v;
                        let target = 1.0 + 0.25 * (alpha * ch.s.v).powi(4);
                        identity_sup = identity_sup.max((ib.norm_sq().v - target).abs());
                    }
                    if wedge.is_blend() {
                        let ia = interface_block(&scene.interface_chart(p, t)?, frame);
                        let ib = boundary_block(&scene.boundary_chart(p)?, frame);
                        pair_pool.push((r, (ia.v - ib.v).norm()));
                    }
                }
            }

            // The interpolation weight along rays through the ramp region
            // of both blend wedges.
            for side in [0usize, 1] {
                let phi: f64 = if side == 1 { 0.88 } else { -0.88 };
                let dir = phi.cos() * frame.n_bd + phi.sin() * frame.n_axis;
                for &r in &log_spaced(1e-5 * frame.r_c, 0.8 * frame.r_c, 12) {
                    let p = frame.c + r * dir;
                    if !scene.boundary.contains(p) {
                        continue;
                    }
                    let lam = interp_lambda(frame, p, side)?;
                    let vel = scene.velocity.eval(p, t);
                    lambda_material_sup = lambda_material_sup.max(lam.material(vel).abs());
                    lambda_grad_floor = lambda_grad_floor.min(lam.dx.norm() * r);
                }
            }

            seam_sup = seam_sup.max(seam_jump(scene, frame, t)?);
        }
    }

    Ok(ContactReport {
        transport_fit: order_fit(&transport_pool, ANALYTIC_FLOOR),
        length_material_sup: length_sup,
        compat_value_fit: order_fit(&compat_value_pool, ANALYTIC_FLOOR),
        compat_tilt_fit: order_fit(&compat_tilt_pool, ANALYTIC_FLOOR),
        aux_pair_fit: order_fit(&pair_pool, ANALYTIC_FLOOR),
        aux_length_fit: order_fit(&aux_length_pool, ANALYTIC_FLOOR),
        identity_defect_sup: identity_sup,
        seam_jump_sup: seam_sup,
        lambda_material_sup,
        lambda_grad_scale_floor: lambda_grad_floor,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec2;
    use crate::numerics::fd::{d1_central4, grad4};
    use crate::numerics::{rng_from_seed, sample_unit_disk};
    use crate::scene::SceneSpec;
    use approx::assert_relative_eq;

    fn scene_from(toml: &str) -> Scene {
        toml::from_str::<SceneSpec>(toml).unwrap().build().unwrap()
    }

    fn rigid_diameter() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            name = "rigid"
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

    fn static_diameter() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            name = "static"
            horizon = 1.0
            [domain]
            kind = "disk"
            [interface]
            kind = "diameter"
            angle = 1.5707963267948966
            "#,
        )
    }

    fn static_arc() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            name = "arc"
            horizon = 1.0
            [domain]
            kind = "disk"
            [interface]
            kind = "orthogonal-arc"
            radius = 0.75
            [velocity]
            kind = "zero"
            "#,
        )
    }

    fn sheared_diameter() -> Scene {
        scene_from(
            r#"
            schema = "contactline-scene/1"
            name = "shear"
            horizon = 0.6
            [domain]
            kind = "disk"
            [interface]
            kind = "diameter"
            angle = 1.5707963267948966
            [velocity]
            kind = "radial-shear"
            omega = 0.8
            beta = 0.45
            "#,
        )
    }

    fn top_contact(scene: &Scene, t: f64) -> ContactFrame {
        scene
            .contacts(t)
            .unwrap()
            .into_iter()
            .find(|f| f.c.y > 0.0)
            .unwrap()
    }

    #[test]
    fn interface_block_frozen_values_at_the_top_contact() {
        let scene = static_diameter();
        let f = top_contact(&scene, 0.0);
        // Unit disk wall: alpha = -1, so at p = (0.1, 0.9) the block is
        // n + alpha s tau_loc - alpha^2 s^2 / 2 n with s = 0.1 and
        // tau_loc = tau_int = (0, 1):  (1 - 0.005, -0.1).
        let xi = xi_aux_interface(&scene, &f, vec2(0.1, 0.9), 0.0).unwrap();
        assert_relative_eq!(xi.v.x, 0.995, epsilon = 1e-14);
        assert_relative_eq!(xi.v.y, -0.1, epsilon = 1e-14);
        assert_relative_eq!(xi.norm_sq().v, 1.0 + 0.25e-4, epsilon = 1e-13);
        // On the interface itself the block is the plain normal.
        let on = xi_aux_interface(&scene, &f, vec2(0.0, 0.9), 0.0).unwrap();
        assert_relative_eq!(on.v.x, 1.0, epsilon = 1e-14);
        assert_relative_eq!(on.v.y, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn boundary_block_is_the_rotated_tangent_for_the_straight_diameter() {
        let scene = static_diameter();
        let f = top_contact(&scene, 0.0);
        // The diameter is straight (alpha_boundary = 0), so the block is
        // the anchored wall tangent of the foot: (y, -x)/|p|.
        let p = vec2(0.3, 0.9);
        let xi = xi_aux_boundary(&scene, &f, p, 0.0).unwrap();
        let r = p.norm();
        assert_relative_eq!(xi.v.x, p.y / r, epsilon = 1e-13);
        assert_relative_eq!(xi.v.y, -p.x / r, epsilon = 1e-13);
        // Matches the anchored frame at the contact itself.
        let at_c = xi_aux_boundary(&scene, &f, f.c, 0.0).unwrap();
        assert_relative_eq!(at_c.v.x, f.n_int.x, epsilon = 1e-14);
        assert_relative_eq!(at_c.v.y, f.n_int.y, epsilon = 1e-14);
    }

    #[test]
    fn interpolation_weight_plateaus_on_the_shared_rays() {
        let scene = static_diameter();
        let f = top_contact(&scene, 0.0);
        for side in [0usize, 1] {
            for frac in [0.2, 0.5, 0.9] {
                let lam =
                    interp_lambda(&f, f.c + frac * f.r_c * f.x_int[side], side).unwrap();
                assert_relative_eq!(lam.v, 1.0, epsilon = 1e-14);
                assert!(lam.dx.norm() < 1e-14);
                let lam =
                    interp_lambda(&f, f.c + frac * f.r_c * f.x_blend[side], side).unwrap();
                assert_relative_eq!(lam.v, 0.0, epsilon = 1e-14);
                assert!(lam.dx.norm() < 1e-14);
            }
        }
        // Interface-cone interior points sit on the plateau as well.
        let lam = interp_lambda(&f, vec2(0.1, 0.9), 1).unwrap();
        assert_relative_eq!(lam.v, 1.0, epsilon = 1e-14);

        let err = interp_lambda(&f, f.c, 1).unwrap_err();
        assert!(matches!(err, Error::AtContactPoint { .. }), "{err:?}");
    }

    #[test]
    fn interpolation_weight_jets_match_finite_differences() {
        let scene = rigid_diameter();
        let t = 0.3;
        let f = top_contact(&scene, t);
        let phi: f64 = 0.88;
        let dir = phi.cos() * f.n_bd + phi.sin() * f.n_axis;
        let p = f.c + 0.4 * f.r_c * dir;
        let lam = interp_lambda(&f, p, 1).unwrap();
        assert!(lam.v > 0.0 && lam.v < 1.0, "expected a ramp point, got {}", lam.v);

        let fd_dx = grad4(|q| interp_lambda(&f, q, 1).unwrap().v, p, 1e-6);
        assert_relative_eq!(lam.dx.x, fd_dx.x, epsilon = 1e-7);
        assert_relative_eq!(lam.dx.y, fd_dx.y, epsilon = 1e-7);

        let fd_dt = d1_central4(
            |s| {
                let fs = top_contact(&scene, s);
                interp_lambda(&fs, p, 1).unwrap().v
            },
            t,
            1e-5,
        );
        assert_relative_eq!(lam.dt, fd_dt, epsilon = 1e-7);
    }

    #[test]
    fn length_identity_holds_exactly_at_ten_thousand_samples() {
        let scene = rigid_diameter();
        let mut rng = rng_from_seed(41);
        let mut checked = 0usize;
        let mut worst: f64 = 0.0;
        for &t in &[0.0, 0.37, 1.0] {
            let frames = scene.contacts(t).unwrap();
            let mut kept = 0usize;
            while kept < 3400 {
                let f = &frames[kept % 2];
                let p = f.c + f.r_c * sample_unit_disk(&mut rng);
                if !scene.boundary.contains(p) || f.classify(p) == Wedge::OutsideBall {
                    continue;
                }
                if let Ok(ch) = scene.interface_chart(p, t) {
                    let ia = interface_block(&ch, f);
                    let m = blocks(f).alpha_interface.v * ch.s.v;
                    worst = worst.max((ia.norm_sq().v - (1.0 + 0.25 * m.powi(4))).abs());
                }
                let ch = scene.boundary_chart(p).unwrap();
                let ib = boundary_block(&ch, f);
                let m = blocks(f).alpha_boundary.v * ch.s.v;
                worst = worst.max((ib.norm_sq().v - (1.0 + 0.25 * m.powi(4))).abs());
                kept += 1;
                checked += 1;
            }
        }
        assert!(checked >= 10_000, "only {checked} samples");
        assert!(worst <= 1e-12, "identity defect {worst:.3e}");
    }

    #[test]
    fn normalized_field_is_normal_on_interface_and_tangent_on_wall() {
        let scene = static_arc();
        let f = top_contact(&scene, 0.0);
        // Interface points inside the ball: field equals the unit normal
        // and its divergence is minus the interface curvature.
        for frac in [0.15, 0.4, 0.7] {
            // Project a point a bit below the contact onto the interface
            // to get genuine on-interface samples inside the ball.
            let p0 = f.c + frac * f.r_hat_c * f.n_bd;
            let on_interface = scene.interface_chart(p0, 0.0).unwrap().p.v;
            let xi = xi_contact(&scene, &f, on_interface, 0.0).unwrap();
            let chi = scene.interface_chart(on_interface, 0.0).unwrap();
            assert!((xi.v - chi.n.v).norm() < 1e-12);
            assert_relative_eq!(xi.divergence(), -chi.h, epsilon = 1e-9);
        }
        // Wall points inside the ball: field is tangent to the wall.
        for ang in [-0.25, -0.1, 0.1, 0.25] {
            let p = scene.boundary.at_angle(f.c.y.atan2(f.c.x) + ang);
            if f.classify(p) == Wedge::OutsideBall {
                continue;
            }
            let xi = xi_contact(&scene, &f, p, 0.0).unwrap();
            let n_bd = -p / p.norm();
            assert!(xi.v.dot(&n_bd).abs() < 1e-13, "tangency at angle {ang}");
        }
        // At the contact point itself the field is the interface normal.
        let xi = xi_contact(&scene, &f, f.c, 0.0).unwrap();
        assert!((xi.v - f.n_int).norm() < 1e-13);
    }

    #[test]
    fn report_on_the_rigid_diameter() {
        let scene = rigid_diameter();
        let report = verify_contact_properties(&scene, 9).unwrap();
        // A rigid rotation transports the whole construction exactly.
        assert!(report.transport_fit.passes(0.9), "{}", report.transport_fit.describe());
        assert!(report.length_material_sup < 1e-10, "{report:?}");
        assert!(report.compat_value_fit.passes(0.9), "{}", report.compat_value_fit.describe());
        assert!(report.compat_tilt_fit.passes(1.9), "{}", report.compat_tilt_fit.describe());
        assert!(report.aux_pair_fit.passes(1.9), "{}", report.aux_pair_fit.describe());
        assert!(report.aux_length_fit.passes(3.9), "{}", report.aux_length_fit.describe());
        assert!(report.identity_defect_sup <= 1e-12, "{report:?}");
        assert!(report.seam_jump_sup <= 1e-8, "{report:?}");
        assert!(report.lambda_material_sup.is_finite());
        assert!(report.lambda_grad_scale_floor > 1.0, "{report:?}");
    }

    #[test]
    fn report_on_the_static_arc() {
        let scene = static_arc();
        let report = verify_contact_properties(&scene, 9).unwrap();
        assert!(report.transport_fit.passes(0.9));
        assert!(report.length_material_sup < 1e-13, "{report:?}");
        assert!(report.compat_value_fit.passes(0.9), "{}", report.compat_value_fit.describe());
        assert!(report.aux_pair_fit.passes(1.9), "{}", report.aux_pair_fit.describe());
        // Both curvature coefficients are nonzero here, so the quartic
        // length defect is a genuine power law.
        assert!(
            matches!(report.aux_length_fit, OrderFit::Fit { .. }),
            "{}",
            report.aux_length_fit.describe()
        );
        assert!(report.aux_length_fit.passes(3.9), "{}", report.aux_length_fit.describe());
        assert!(report.identity_defect_sup <= 1e-12, "{report:?}");
        assert!(report.seam_jump_sup <= 1e-8, "{report:?}");
    }

    #[test]
    fn report_on_the_sheared_diameter() {
        let scene = sheared_diameter();
        let report = verify_contact_properties(&scene, 7).unwrap();
        // Genuinely moving, curving contacts: the transport residual is a
        // real power law and the curvature-rate plumbing is exercised.
        assert!(report.transport_fit.passes(0.9), "{}", report.transport_fit.describe());
        assert!(report.length_material_sup < 1e-10, "{report:?}");
        assert!(report.seam_jump_sup <= 1e-8, "{report:?}");
        assert!(report.identity_defect_sup <= 1e-12, "{report:?}");
        assert!(report.lambda_material_sup.is_finite());
    }

    #[test]
    fn normalization_guard_rejects_short_vectors() {
        let p = vec2(0.2, 0.1);
        let err = normalize_guarded(VecJet::constant(vec2(0.2, 0.3)), p).unwrap_err();
        assert!(matches!(err, Error::NormalizationUnsafe { .. }), "{err:?}");
        let ok = normalize_guarded(VecJet::constant(vec2(0.0, 0.9)), p).unwrap();
        assert_relative_eq!(ok.v.norm(), 1.0, epsilon = 1e-15);
    }
}
