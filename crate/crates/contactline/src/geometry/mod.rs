//! Planar geometry of the moving two-phase configuration: the fixed disk
//! boundary, the evolving interface, signed-distance charts with exact
//! space-time jets, contact-point frames with their wedge decomposition,
//! and the brute-force search for the localization radii.

mod boundary;
mod contact;
mod curve;
mod families;
mod radii;
mod spline;

pub use boundary::DomainBoundary;
pub use contact::{locate_contact_points, wedge_angle_residual, ContactFrame, Wedge};
pub use curve::{
    chart_jet, curve_frames, dist_to_curve, frame_time_derivative, nearest_param,
    nearest_param_dense, ChartEval, ChartJet, ParamCurve,
};
pub use families::InterfaceFamily;
pub use radii::{estimate_localization_radii, LocalizationRadii};
pub use spline::CubicSpline;
