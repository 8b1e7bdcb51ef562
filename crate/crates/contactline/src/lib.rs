//! Geometric calibration fields and stability functionals for two-phase
//! flow in a planar bounded domain where the fluid-fluid interface meets
//! the domain boundary at a right angle.
//!
//! The crate builds, for a prescribed ("strong") interface evolution:
//!
//! * signed-distance charts for the domain boundary and the moving
//!   interface, together with contact-point frames and the wedge
//!   decomposition around each contact point ([`geometry`]),
//! * a boundary-adapted extension of the interface unit normal, assembled
//!   from a bulk extension, contact-point corrector blocks and a partition
//!   of unity ([`calibration`]),
//! * a transported weight that changes sign across the interface and
//!   vanishes on interface and boundary ([`weights`]),
//! * relative-entropy / bulk-error functionals comparing a second ("weak")
//!   phase arrangement against the strong one, including varifold lifts
//!   with boundary mass and multiplicity ([`functionals`]),
//! * a marker-based transport simulator for validating the prescribed
//!   families against honest ODE integration ([`transport`]).
//!
//! Every claimed property (orthogonality on the boundary, divergence =
//! minus curvature on the interface, residual decay orders, Gronwall
//! stability of the relative entropy, ...) is checked numerically by the
//! suites in [`suite`]; the CLI in the companion crate drives them.

pub mod math;
pub mod jet;
pub mod profiles;
pub mod numerics;
pub mod error;
pub mod geometry;
pub mod velocity;
pub mod scene;
pub mod calibration;
pub mod weights;
pub mod functionals;

pub use error::Error;
pub use math::{Mat2, Vec2};
