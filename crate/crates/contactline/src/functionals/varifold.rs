//! Finite-atom oriented varifolds over the closed disk.
//!
//! An atom carries a position, a unit orientation, a mass, and the
//! portion of that mass accounted for by the phase boundary it came
//! from (`bv_mass`). The ratio bv_mass/mass is the multiplicity density
//! at the atom, so "interface mass not seen by the phase" — hidden
//! walls, higher multiplicity — is the bookkeeping difference
//! `mass - bv_mass`, and the energy decomposition below comes out exact
//! instead of resting on a second quadrature.

use crate::error::Error;
use crate::functionals::phase::PhaseState;
use crate::geometry::DomainBoundary;
use crate::math::{rot90, vec2, Vec2};
use crate::numerics::KahanSum;

#[derive(Debug, Clone, Copy)]
pub struct VarifoldAtom {
    pub x: Vec2,
    /// Unit orientation (a normal direction).
    pub s: Vec2,
    pub mass: f64,
    /// Portion of `mass` matched by the phase boundary measure at this
    /// point; mass − bv_mass is invisible to the phase.
    pub bv_mass: f64,
    pub on_wall: bool,
}

#[derive(Debug, Clone)]
pub struct DiscreteVarifoldSlice {
    pub atoms: Vec<VarifoldAtom>,
    pub t: f64,
}

/// Unit-multiplicity lift of a phase: one atom per interface node,
/// oriented by the node normal, with the full node weight on both mass
/// ledgers.
pub fn lift_phase_to_varifold(phase: &PhaseState) -> DiscreteVarifoldSlice {
    let atoms = phase
        .interface
        .iter()
        .map(|nd| VarifoldAtom { x: nd.x, s: nd.n, mass: nd.w, bv_mass: nd.w, on_wall: false })
        .collect();
    DiscreteVarifoldSlice { atoms, t: phase.t }
}

/// Lift with uniform multiplicity `mult >= 1`: the varifold carries
/// `mult` times the interface mass while the phase boundary stays the
/// same, so the multiplicity density is 1/mult everywhere.
pub fn lift_with_multiplicity(phase: &PhaseState, mult: f64) -> Result<DiscreteVarifoldSlice, Error> {
    if !(mult >= 1.0) || !mult.is_finite() {
        return Err(Error::FixtureInconsistent(format!(
            "varifold multiplicity must be a finite value >= 1, got {mult}"
        )));
    }
    let atoms = phase
        .interface
        .iter()
        .map(|nd| VarifoldAtom {
            x: nd.x,
            s: nd.n,
            mass: mult * nd.w,
            bv_mass: nd.w,
            on_wall: false,
        })
        .collect();
    Ok(DiscreteVarifoldSlice { atoms, t: phase.t })
}

impl DiscreteVarifoldSlice {
    /// Adds a wall atom of the given mass at a polar angle, oriented
    /// along the inward disk normal. No phase boundary backs it, so it
    /// shows up in the hidden-boundary accounting.
    pub fn push_boundary_atom(&mut self, boundary: DomainBoundary, angle: f64, mass: f64) {
        let x = boundary.at_angle(angle);
        self.atoms.push(VarifoldAtom {
            x,
            s: -x / boundary.radius,
            mass,
            bv_mass: 0.0,
            on_wall: true,
        });
    }

    pub fn total_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for a in &self.atoms {
            acc.add(a.mass);
        }
        acc.value()
    }

    pub fn wall_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for a in &self.atoms {
            if a.on_wall {
                acc.add(a.mass);
            }
        }
        acc.value()
    }

    /// Interior mass in excess of the phase boundary,
    /// Σ (mass − bv_mass) over atoms off the wall.
    pub fn interior_excess(&self) -> f64 {
        let mut acc = KahanSum::new();
        for a in &self.atoms {
            if !a.on_wall {
                acc.add(a.mass - a.bv_mass);
            }
        }
        acc.value()
    }

    /// Sum of the backing phase-boundary masses.
    pub fn bv_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for a in &self.atoms {
            acc.add(a.bv_mass);
        }
        acc.value()
    }

    /// Structural invariants: nonnegative masses, unit orientations,
    /// multiplicity density in [0, 1], wall atoms unbacked.
    pub fn validate(&self) -> Result<(), Error> {
        for (k, a) in self.atoms.iter().enumerate() {
            let bad = !(a.mass >= 0.0)
                || a.bv_mass < 0.0
                || a.bv_mass > a.mass * (1.0 + 1e-12)
                || (a.s.norm() - 1.0).abs() > 1e-9
                || (a.on_wall && a.bv_mass != 0.0);
            if bad {
                return Err(Error::FixtureInconsistent(format!(
                    "varifold atom {k} violates the mass/orientation invariants \
                     (mass {:.3e}, bv {:.3e}, |s| {:.6}, wall {})",
                    a.mass,
                    a.bv_mass,
                    a.s.norm(),
                    a.on_wall
                )));
            }
        }
        Ok(())
    }
}

/// How far the varifold is from being the oriented boundary measure of
/// the phase, tested against a fixed basis of smooth vector fields that
/// are tangential on the wall (so wall atoms are invisible to every
/// test field, as they should be). Returns the worst relative defect of
///   Σ mass ψ(x)·s   versus   Σ w ψ(x)·n over interface nodes.
///
/// Exact lifts return zero by construction; multiplicity or transported
/// markers show their quadrature-level mismatch.
pub fn compatibility_residual(varifold: &DiscreteVarifoldSlice, phase: &PhaseState) -> f64 {
    let r = phase.boundary().radius;
    let fields: [&dyn Fn(Vec2) -> Vec2; 9] = [
        &|x| rot90(x),
        &|x| rot90(x) * x.x,
        &|x| rot90(x) * x.y,
        &|x| rot90(x) * (x.x * x.x),
        &|x| rot90(x) * (x.x * x.y),
        &|x| rot90(x) * (x.y * x.y),
        &move |x| vec2(r * r - x.norm_squared(), 0.0),
        &move |x| vec2(0.0, r * r - x.norm_squared()),
        &move |x| x * (r * r - x.norm_squared()),
    ];
    let mut worst: f64 = 0.0;
    for psi in fields {
        let mut v_side = KahanSum::new();
        let mut v_scale = KahanSum::new();
        for a in &varifold.atoms {
            v_side.add(a.mass * psi(a.x).dot(&a.s));
            v_scale.add(a.mass * psi(a.x).norm());
        }
        let mut b_side = KahanSum::new();
        let mut b_scale = KahanSum::new();
        for nd in &phase.interface {
            b_side.add(nd.w * psi(nd.x).dot(&nd.n));
            b_scale.add(nd.w * psi(nd.x).norm());
        }
        let scale = (v_scale.value() + b_scale.value()).max(1e-30);
        worst = worst.max((v_side.value() - b_side.value()).abs() / scale);
    }
    worst
}
