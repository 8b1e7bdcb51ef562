//! Error functionals between a strong two-phase configuration and a
//! weak candidate.
//!
//! The weak side is carried as a discrete phase ([`PhaseState`]) plus an
//! oriented varifold ([`DiscreteVarifoldSlice`]); the strong side is a
//! scene with its calibration and transported weight. On top of those
//! sit the interface and bulk error functionals with their
//! decompositions and controls, and the time-sampled stability checks:
//! the entropy balance with its advection/surface-tension remainders,
//! the slicing coercivity bound, and the evolution identity of the bulk
//! error.
//!
//! Curve integrals are composite Gauss sums over nodes seeded at the
//! calibration's assembly seams; area integrals run in adaptive polar
//! form ([`disk_integral`]), which localizes the indicator jumps that
//! defeat fixed-panel product rules.

mod disk;
mod entropy;
mod fields;
mod inequality;
mod phase;
mod varifold;

pub use disk::disk_integral;
pub use entropy::{
    bulk_error, interface_error, relative_entropy, tilt_excess_controls, EntropyReport,
    InterfaceError, TiltControls,
};
pub use fields::{BumpVelocity, FlowField};
pub use inequality::{
    bulk_error_evolution_check, calibration_seam_params, entropy_series,
    rel_entropy_inequality_terms, slicing_coercivity_check, BulkEvolutionCheck, EntropySample,
    InequalityGrid, InequalityTerms, SlicingReport,
};
pub use phase::{CurveNode, PhaseState};
pub use varifold::{
    compatibility_residual, lift_phase_to_varifold, lift_with_multiplicity, DiscreteVarifoldSlice,
    VarifoldAtom,
};
