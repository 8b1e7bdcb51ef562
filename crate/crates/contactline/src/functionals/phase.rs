//! Discrete phase regions: quadrature nodes along the moving interface
//! and the wetted wall arc, with area, perimeter and a total containment
//! test.
//!
//! All downstream functionals consume a [`PhaseState`]: curve integrals
//! become weighted node sums, area integrals use the indicator. Node
//! normals follow the interface convention (into the positive phase);
//! wall nodes carry the outward normal of the disk, so the closed
//! boundary of the positive region is `interface (reversed normal) +
//! wall`, which is what the divergence-theorem bookkeeping below relies
//! on.

use crate::error::Error;
use crate::geometry::{curve_frames, DomainBoundary, InterfaceFamily, ParamCurve};
use crate::math::{vec2, Vec2};
use crate::numerics::{gauss_legendre, KahanSum};

/// One quadrature node on an oriented curve: position, unit normal and
/// the arc-length weight it carries. `rho` is the generating parameter
/// (curve parameter on the interface, polar angle on the wall).
#[derive(Debug, Clone, Copy)]
pub struct CurveNode {
    pub x: Vec2,
    pub n: Vec2,
    pub w: f64,
    pub rho: f64,
}

/// The positive phase of an interface family inside the disk, frozen at
/// one time.
#[derive(Debug, Clone)]
pub struct PhaseState {
    /// Nodes on the interface; normals point into the positive phase.
    pub interface: Vec<CurveNode>,
    /// Nodes on the wetted wall arc; normals point out of the disk.
    pub wall: Vec<CurveNode>,
    /// Interface length inside the disk (sum of interface weights).
    pub perimeter: f64,
    /// Area of the positive region.
    pub area: f64,
    pub t: f64,
    family: InterfaceFamily,
    boundary: DomainBoundary,
    panels: usize,
    seeds: Vec<f64>,
}

const GAUSS_ORDER: usize = 8;

/// Composite Gauss nodes along a parametrized stretch, with extra panel
/// edges at the given seed parameters (places where an integrand is
/// known to lose smoothness — quadrature across such a point would
/// otherwise dominate the error budget).
fn curve_nodes(
    family: &InterfaceFamily,
    t: f64,
    panels: usize,
    seeds: &[f64],
) -> Vec<CurveNode> {
    let (a, b) = family.domain();
    let mut edges: Vec<f64> = seeds
        .iter()
        .copied()
        .filter(|s| *s > a && *s < b)
        .chain([a, b])
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|x, y| (*x - *y).abs() < 1e-12 * (b - a));

    let target = (b - a) / panels as f64;
    let gl = gauss_legendre(GAUSS_ORDER);
    let mut nodes = Vec::new();
    for pair in edges.windows(2) {
        let len = pair[1] - pair[0];
        let sub = ((len / target).ceil() as usize).max(1);
        for k in 0..sub {
            let lo = pair[0] + len * k as f64 / sub as f64;
            let half = 0.5 * len / sub as f64;
            let mid = lo + half;
            for &(x, wt) in gl.iter() {
                let rho = mid + half * x;
                let (n, _, _, q) = curve_frames(family, rho, t);
                nodes.push(CurveNode {
                    x: family.point(rho, t),
                    n,
                    w: wt * half * q,
                    rho,
                });
            }
        }
    }
    nodes
}

impl PhaseState {
    /// Builds the phase at time `t`. `panels` sets the base resolution
    /// of the interface quadrature (times Gauss order 8 for the node
    /// count); `seeds` are interface parameters that become panel edges.
    pub fn from_family(
        family: &InterfaceFamily,
        boundary: DomainBoundary,
        t: f64,
        panels: usize,
        seeds: &[f64],
    ) -> Result<Self, Error> {
        let interface = curve_nodes(family, t, panels, seeds);
        let mut perimeter = KahanSum::new();
        for n in &interface {
            perimeter.add(n.w);
        }

        let (a, b) = family.domain();
        let ends = [family.point(a, t), family.point(b, t)];
        let r = boundary.radius;
        for e in ends {
            if boundary.signed_dist(e).abs() > 1e-9 * r {
                return Err(Error::FixtureInconsistent(format!(
                    "interface endpoint ({:.6}, {:.6}) is off the wall by {:.3e}",
                    e.x,
                    e.y,
                    boundary.signed_dist(e).abs()
                )));
            }
        }
        let alpha = f64::atan2(ends[0].y, ends[0].x);
        let beta = f64::atan2(ends[1].y, ends[1].x);
        let tau = std::f64::consts::TAU;
        let span_ccw = (beta - alpha).rem_euclid(tau);

        // The wetted arc is whichever of the two wall arcs between the
        // contacts has its midpoint in the positive phase (tested just
        // inside the disk, where the phase indicator is unambiguous).
        let probe = |start: f64, span: f64| {
            let m = boundary.at_angle(start + 0.5 * span) * (1.0 - 1e-7);
            family.phase_side(m, t) > 0.0
        };
        let ccw_positive = probe(alpha, span_ccw);
        let cw_positive = probe(beta, tau - span_ccw);
        if ccw_positive == cw_positive {
            return Err(Error::FixtureInconsistent(
                "could not identify the wetted wall arc: both arcs between the \
                 contact points report the same phase"
                    .into(),
            ));
        }
        let (start, span) = if ccw_positive {
            (alpha, span_ccw)
        } else {
            (beta, tau - span_ccw)
        };

        let arc_panels = ((span * r) / ((b - a) / panels as f64)).ceil().max(1.0) as usize;
        let gl = gauss_legendre(GAUSS_ORDER);
        let mut wall = Vec::with_capacity(arc_panels * GAUSS_ORDER);
        for k in 0..arc_panels {
            let half = 0.5 * span / arc_panels as f64;
            let mid = start + span * k as f64 / arc_panels as f64 + half;
            for &(x, wt) in gl.iter() {
                let th = mid + half * x;
                let p = boundary.at_angle(th);
                wall.push(CurveNode { x: p, n: p / r, w: wt * half * r, rho: th });
            }
        }

        // Area by the divergence theorem over the closed boundary of the
        // positive region: outward normal is -n on the interface and the
        // radial direction on the wall (where x . n = R exactly).
        let mut area = KahanSum::new();
        for nd in &interface {
            area.add(-0.5 * nd.w * nd.x.dot(&nd.n));
        }
        area.add(0.5 * r * r * span);

        let state = PhaseState {
            interface,
            wall,
            perimeter: perimeter.value(),
            area: area.value(),
            t,
            family: family.clone(),
            boundary,
            panels,
            seeds: seeds.to_vec(),
        };
        if state.area <= 0.0 || state.area >= std::f64::consts::PI * r * r {
            return Err(Error::FixtureInconsistent(format!(
                "positive phase area {:.6} is outside the disk range",
                state.area
            )));
        }
        Ok(state)
    }

    /// Convenience constructor from a scene (no seeded panel edges).
    pub fn from_scene(scene: &crate::scene::Scene, t: f64, panels: usize) -> Result<Self, Error> {
        Self::from_family(&scene.family, scene.boundary, t, panels, &[])
    }

    /// Same phase, `factor` times the panel resolution.
    pub fn refined(&self, factor: usize) -> Result<Self, Error> {
        Self::from_family(
            &self.family,
            self.boundary,
            self.t,
            self.panels * factor.max(1),
            &self.seeds,
        )
    }

    /// Signed side of the interface: positive in the phase the normals
    /// point into.
    pub fn side(&self, p: Vec2) -> f64 {
        self.family.phase_side(p, self.t)
    }

    /// Indicator of the positive phase (0/1; ½ exactly on the curve).
    pub fn indicator(&self, p: Vec2) -> f64 {
        0.5 * (self.side(p) + 1.0)
    }

    pub fn boundary(&self) -> DomainBoundary {
        self.boundary
    }

    pub fn family(&self) -> &InterfaceFamily {
        &self.family
    }

    /// Polar angles of the two contact points.
    pub fn contact_angles(&self) -> [f64; 2] {
        let (a, b) = self.family.domain();
        let ea = self.family.point(a, self.t);
        let eb = self.family.point(b, self.t);
        [f64::atan2(ea.y, ea.x), f64::atan2(eb.y, eb.x)]
    }

    /// Residual of the closed-boundary identity: the outward normal
    /// integrated over interface plus wall must vanish. A nonzero value
    /// means the node bookkeeping (orientations, weights, arc choice)
    /// is inconsistent.
    pub fn closure_defect(&self) -> f64 {
        let mut sx = KahanSum::new();
        let mut sy = KahanSum::new();
        for nd in &self.interface {
            sx.add(-nd.w * nd.n.x);
            sy.add(-nd.w * nd.n.y);
        }
        for nd in &self.wall {
            sx.add(nd.w * nd.n.x);
            sy.add(nd.w * nd.n.y);
        }
        vec2(sx.value(), sy.value()).norm()
    }
}
