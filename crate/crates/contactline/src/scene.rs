//! Scene descriptions: the immutable problem setup, loaded from TOML.
//!
//! A scene pairs a domain preset with an interface preset and a velocity
//! preset. The evolving interface family is *derived* from that pairing
//! (a diameter under rigid rotation becomes a rotating diameter, under
//! differential rotation a sheared diameter, and so on), so a scene can
//! never describe an interface that is out of sync with the velocity
//! transporting it. Building a scene validates the configuration — the
//! contact angle, endpoint placement, and localization radii — once, up
//! front; everything downstream can then assume an admissible setup.

use crate::error::Error;
use crate::geometry::{
    chart_jet, estimate_localization_radii, locate_contact_points, ChartJet, ContactFrame,
    DomainBoundary, InterfaceFamily, LocalizationRadii,
};
use crate::math::Vec2;
use crate::velocity::VelocityField;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCENE_SCHEMA: &str = "contactline-scene/1";

/// Largest tolerated deviation of the contact angle from 90 degrees.
pub const ANGLE_TOL_DEG: f64 = 2.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    /// Format marker; must equal [`SCENE_SCHEMA`].
    pub schema: String,
    #[serde(default)]
    pub name: String,
    /// Final time of the evolution.
    pub horizon: f64,
    pub domain: DomainPreset,
    pub interface: InterfacePreset,
    #[serde(default)]
    pub velocity: VelocityField,
    #[serde(default)]
    pub fluids: FluidParams,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainPreset {
    Disk {
        #[serde(default = "one")]
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", rename_all_fields = "kebab-case")]
pub enum InterfacePreset {
    /// Straight diameter at `angle` (radians from the x-axis) at t = 0.
    Diameter {
        #[serde(default)]
        angle: f64,
    },
    /// Circular arc meeting the boundary circle at right angles, centered
    /// on the ray at `axis-angle`.
    OrthogonalArc {
        radius: f64,
        #[serde(default)]
        axis_angle: f64,
    },
    /// Straight chord at a signed offset from the center. Meets the
    /// circle away from 90 degrees, so it exists to exercise the
    /// validation failure path.
    Chord { offset: f64 },
}

/// Surface tension and the (equal-viscosity) fluid parameters of the two
/// phases. Only ratios matter for the functionals, but keeping them
/// explicit matches how the energies are written.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FluidParams {
    #[serde(default = "one")]
    pub sigma: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default = "two")]
    pub rho_plus: f64,
    #[serde(default = "one")]
    pub rho_minus: f64,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}

impl Default for FluidParams {
    fn default() -> Self {
        FluidParams { sigma: 1.0, mu: 1.0, rho_plus: 2.0, rho_minus: 1.0 }
    }
}

impl SceneSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::SceneParse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.schema != SCENE_SCHEMA {
            return Err(Error::SceneParse(format!(
                "unsupported scene schema {:?} (this build reads {:?})",
                self.schema, SCENE_SCHEMA
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::SceneParse(format!(
                "horizon must be a positive time, got {}",
                self.horizon
            )));
        }
        let f = &self.fluids;
        for (label, v) in [
            ("sigma", f.sigma),
            ("mu", f.mu),
            ("rho-plus", f.rho_plus),
            ("rho-minus", f.rho_minus),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::SceneParse(format!("fluid parameter {label} must be positive, got {v}")));
            }
        }
        let DomainPreset::Disk { radius } = self.domain;
        if (radius - 1.0).abs() > 1e-12 {
            return Err(Error::SceneParse(
                "the interface and velocity presets are built for the unit disk; set domain radius = 1".into(),
            ));
        }
        match self.interface {
            InterfacePreset::Diameter { angle } => {
                if !angle.is_finite() {
                    return Err(Error::SceneParse("diameter angle must be finite".into()));
                }
            }
            InterfacePreset::OrthogonalArc { radius, axis_angle } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::SceneParse(format!(
                        "arc radius must be positive, got {radius}"
                    )));
                }
                if !axis_angle.is_finite() {
                    return Err(Error::SceneParse("arc axis-angle must be finite".into()));
                }
            }
            InterfacePreset::Chord { offset } => {
                if !(offset.is_finite() && offset.abs() < 1.0) {
                    return Err(Error::SceneParse(format!(
                        "chord offset must lie strictly inside the disk, got {offset}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Derive the transported interface family for this interface +
    /// velocity pairing.
    fn family(&self) -> Result<InterfaceFamily, Error> {
        Ok(match (self.interface, self.velocity) {
            (InterfacePreset::Diameter { angle }, VelocityField::Zero) => {
                InterfaceFamily::RotatingDiameter { theta0: angle, omega: 0.0 }
            }
            (InterfacePreset::Diameter { angle }, VelocityField::Rigid { omega }) => {
                InterfaceFamily::RotatingDiameter { theta0: angle, omega }
            }
            (InterfacePreset::Diameter { angle }, VelocityField::RadialShear { omega, beta }) => {
                InterfaceFamily::ShearedDiameter { theta0: angle, omega, beta }
            }
            (InterfacePreset::OrthogonalArc { radius, axis_angle }, VelocityField::Zero) => {
                InterfaceFamily::OrthogonalArc { radius, axis_angle, omega: 0.0 }
            }
            (
                InterfacePreset::OrthogonalArc { radius, axis_angle },
                VelocityField::Rigid { omega },
            ) => InterfaceFamily::OrthogonalArc { radius, axis_angle, omega },
            (InterfacePreset::OrthogonalArc { .. }, VelocityField::RadialShear { .. }) => {
                return Err(Error::SceneParse(
                    "the radial shear deforms an off-center arc (it is no exact solution); \
                     pair the arc with zero or rigid velocity"
                        .into(),
                ))
            }
            (InterfacePreset::Chord { offset }, _) => InterfaceFamily::Chord { offset },
        })
    }

    /// Validate and assemble the full scene (frames probed over the
    /// horizon, localization radii estimated).
    pub fn build(self) -> Result<Scene, Error> {
        self.validate()?;
        let DomainPreset::Disk { radius } = self.domain;
        let boundary = DomainBoundary { radius };
        let family = self.family()?;
        let times: Vec<f64> = (0..=4).map(|k| self.horizon * k as f64 / 4.0).collect();
        let radii =
            estimate_localization_radii(&boundary, &family, &times, ANGLE_TOL_DEG, None)?;
        Ok(Scene { velocity: self.velocity, spec: self, boundary, family, radii })
    }
}

/// A validated scene: geometry, velocity, and certified radii.
#[derive(Debug, Clone)]
pub struct Scene {
    pub spec: SceneSpec,
    pub boundary: DomainBoundary,
    pub family: InterfaceFamily,
    pub velocity: VelocityField,
    pub radii: LocalizationRadii,
}

impl Scene {
    /// Contact frames at time t, with the certified ball radii filled in.
    pub fn contacts(&self, t: f64) -> Result<Vec<ContactFrame>, Error> {
        let mut frames = locate_contact_points(
            &self.boundary,
            &self.family,
            t,
            Some(&self.velocity),
            ANGLE_TOL_DEG,
        )?;
        for (e, f) in frames.iter_mut().enumerate() {
            f.r_c = self.radii.r_contact[e];
            f.r_hat_c = self.radii.r_hat_contact[e];
        }
        Ok(frames)
    }

    /// Signed-distance chart of the interface, certified on |s| < r_int.
    pub fn interface_chart(&self, p: Vec2, t: f64) -> Result<ChartJet, Error> {
        chart_jet(&self.family, p, t, self.radii.r_int)
    }

    /// Signed-distance chart of the boundary circle, certified on
    /// |s| < r_bd.
    pub fn boundary_chart(&self, p: Vec2) -> Result<ChartJet, Error> {
        self.boundary.chart(p, self.radii.r_bd)
    }

    pub fn horizon(&self) -> f64 {
        self.spec.horizon
    }

    pub fn fluids(&self) -> FluidParams {
        self.spec.fluids
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RIGID: &str = r#"
        schema = "contactline-scene/1"
        name = "spin"
        horizon = 1.0

        [domain]
        kind = "disk"

        [interface]
        kind = "diameter"
        angle = 1.5707963267948966

        [velocity]
        kind = "rigid"
        omega = 1.0
    "#;

    #[test]
    fn loads_and_builds_a_rigid_scene() {
        let spec = SceneSpec::from_toml_str(RIGID).unwrap();
        assert_eq!(spec.name, "spin");
        assert_eq!(spec.fluids.rho_plus, 2.0);
        let scene = spec.build().unwrap();
        assert!(matches!(
            scene.family,
            InterfaceFamily::RotatingDiameter { omega, .. } if omega == 1.0
        ));
        assert_eq!(scene.radii.r_int, 1.0);
        let frames = scene.contacts(0.3).unwrap();
        assert_eq!(frames.len(), 2);
        for f in &frames {
            assert!(f.r_c > 0.2);
            assert!(f.r_hat_c > 0.0 && f.r_hat_c <= f.r_c);
            assert!(f.transport_residual.unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn shear_pairing_gives_the_sheared_family() {
        let text = RIGID.replace(
            "kind = \"rigid\"\n        omega = 1.0",
            "kind = \"radial-shear\"\n        omega = 0.8\n        beta = 0.4",
        );
        let scene = SceneSpec::from_toml_str(&text).unwrap().build().unwrap();
        assert!(matches!(
            scene.family,
            InterfaceFamily::ShearedDiameter { omega, beta, .. } if omega == 0.8 && beta == 0.4
        ));
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let text = RIGID.replace("contactline-scene/1", "contactline-scene/9");
        match SceneSpec::from_toml_str(&text).unwrap().build() {
            Err(Error::SceneParse(msg)) => assert!(msg.contains("schema")),
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_line_anchors() {
        let text = RIGID.replace("omega = 1.0", "omega = ");
        match SceneSpec::from_toml_str(&text) {
            Err(Error::SceneParse(msg)) => {
                assert!(msg.contains("line"), "message lacks a line anchor: {msg}")
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn chord_scene_fails_the_angle_check() {
        let text = RIGID.replace(
            "kind = \"diameter\"\n        angle = 1.5707963267948966",
            "kind = \"chord\"\n        offset = 0.5",
        );
        // a chord at offset 0.5 meets the circle at 60 degrees
        match SceneSpec::from_toml_str(&text).unwrap().build() {
            Err(Error::AngleViolation { angle_deg, .. }) => {
                assert!((angle_deg - 60.0).abs() < 1e-9)
            }
            other => panic!("expected an angle violation, got {other:?}"),
        }
    }

    #[test]
    fn arc_with_shear_is_rejected() {
        let text = RIGID
            .replace(
                "kind = \"diameter\"\n        angle = 1.5707963267948966",
                "kind = \"orthogonal-arc\"\n        radius = 0.75",
            )
            .replace(
                "kind = \"rigid\"\n        omega = 1.0",
                "kind = \"radial-shear\"\n        omega = 0.8\n        beta = 0.4",
            );
        assert!(matches!(
            SceneSpec::from_toml_str(&text).unwrap().build(),
            Err(Error::SceneParse(_))
        ));
    }

    #[test]
    fn missing_file_surfaces_io_error() {
        assert!(matches!(
            SceneSpec::load("/nonexistent/scene.toml"),
            Err(Error::SceneIo(_))
        ));
    }
}
