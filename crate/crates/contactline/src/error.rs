use thiserror::Error;

/// Failure modes surfaced by charts, calibrations and scene handling.
///
/// Geometric evaluators return these instead of panicking so the
/// verification suites can distinguish "outside the certified domain"
/// from genuine defects.
#[derive(Debug, Error)]
pub enum Error {
    /// Query point is farther from the interface (or the container wall)
    /// than the chart's certified one-to-one band.
    #[error("point ({x}, {y}) lies outside the tubular band (distance {dist}, band half-width {band})")]
    OutsideTubularBand { x: f64, y: f64, dist: f64, band: f64 },

    /// Interface meets the container wall away from 90 degrees.
    #[error("interface meets the boundary at {angle_deg} degrees at contact ({x}, {y}); need 90 within {tol_deg}")]
    AngleViolation { x: f64, y: f64, angle_deg: f64, tol_deg: f64 },

    /// A curve family produced an unusable configuration (zero-length
    /// interface, contact points collapsing, curvature blow-up, ...).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// The blended calibration field came too close to zero to normalize.
    #[error("calibration field too short to normalize at ({x}, {y}): |xi| = {norm}")]
    NormalizationUnsafe { x: f64, y: f64, norm: f64 },

    /// Evaluation exactly at a contact point, where the interface chart
    /// and several contact-adapted quantities are singular.
    #[error("evaluation at a contact point ({x}, {y}) is not defined")]
    AtContactPoint { x: f64, y: f64 },

    /// A named fixture disagrees with the invariants it is supposed to
    /// satisfy (frozen frames, curvature conventions, ...).
    #[error("fixture inconsistent: {0}")]
    FixtureInconsistent(String),

    /// A calibration or weight was requested outside the region where its
    /// defining formulas apply.
    #[error("query outside calibration domain: {0}")]
    CalibrationDomainMiss(String),

    /// The adaptive integrator could not take an acceptable step.
    #[error("time stepper failed at t = {t}: {detail}")]
    StepFailure { t: f64, detail: String },

    /// A time grid was too coarse for the requested functional difference.
    #[error("time sampling too coarse: {0}")]
    TimeSamplingTooCoarse(String),

    /// A least-squares order fit had too few usable points or no spread.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Scene file could not be read.
    #[error("scene io: {0}")]
    SceneIo(#[from] std::io::Error),

    /// Scene file could not be parsed or failed schema validation.
    #[error("scene parse: {0}")]
    SceneParse(String),
}
