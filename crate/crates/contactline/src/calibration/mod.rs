//! Calibration fields: boundary-adapted extensions of the interface
//! unit normal.
//!
//! The construction runs in three layers. [`bulk`] transports the normal
//! off the interface along the nearest-point projection. [`contact`]
//! replaces that field near the two contact points by expansion blocks
//! adapted to the right angle between interface and wall, interpolated
//! across the wedge decomposition and normalized. [`global`] stitches
//! everything into one field on the closed domain with a partition of
//! unity along the interface and carries the verification suite for the
//! defining properties: unit length up to a quadratic modulation,
//! tangency along the wall, divergence equal to minus the curvature on
//! the interface, and first-order transport by the fluid velocity.

pub mod bulk;
pub mod contact;
pub mod global;

pub use bulk::{verify_bulk_properties, xi_bulk, BulkReport};
pub use contact::{
    blocks, interp_lambda, norm_probe, verify_contact_properties, xi_aux_boundary,
    xi_aux_interface, xi_contact, xi_hat_contact, ContactBlocks, ContactReport,
};
pub use global::{
    verify_calibration_properties, CalibrationReport, CalibrationSlice, Cutoffs, GlobalCalibration,
    Region, VerifySamples,
};
