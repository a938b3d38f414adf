//! JSON configuration and the table of defaults.
//!
//! Every key is optional. Missing keys take the values below and unknown
//! keys are rejected.
//!
//! | key | default | unit |
//! |---|---|---|
//! | `design.total_length` | 140 | mm |
//! | `design.width` | 20 | mm |
//! | `design.wavelength_b` | 30 | mm |
//! | `design.amplitude_a` | 6 | mm |
//! | `design.straight_tail` | 20 | mm |
//! | `design.seam_margin` | 3 | mm |
//! | `balloon.onset_pressure` | 20 | kPa |
//! | `balloon.kappa0` | 280 | N·mm/rad |
//! | `balloon.kappa1` | 500 | N·mm²/rad |
//! | `section_height_H` | 7 | mm |
//! | `material.plastic_thickness` | 0.08 | mm |
//! | `material.plastic_density` | 930 | kg/m³ |
//! | `material.plastic_unit_cost` | 0.21 | USD |
//! | `material.balloon_mass` | 1.03 | g |
//! | `material.balloon_unit_cost` | 0.011 | USD |
//! | `grasp.finger_count` | 3 | |
//! | `grasp.finger_spec` | the `design` section | |
//! | `grasp.palm_radius` | 37.5 | mm |
//! | `grasp.object_radius` | 25 | mm |
//! | `grasp.object_mass` | 35.055 | g |
//! | `grasp.friction_mu` | 0.8 | |
//! | `grasp.pressure` | 50 | kPa |
//!
//! The balloon constants and `section_height_H` are starting points that
//! `calibrate` overwrites.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::calibration::ModelParameters;
use crate::equilibrium::{Actuator, BalloonModel};
use crate::error::{require_positive, Error, Result};
use crate::gripper::GraspScenario;
use crate::pattern::{MaterialModel, PatternSpec};

pub const DEFAULT_SECTION_HEIGHT: f64 = 7.0;

fn default_section_height() -> f64 {
    DEFAULT_SECTION_HEIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub design: PatternSpec,
    pub balloon: BalloonModel,
    #[serde(rename = "section_height_H", default = "default_section_height")]
    pub section_height: f64,
    pub material: MaterialModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grasp: Option<GraspSection>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            design: PatternSpec::default(),
            balloon: BalloonModel::default(),
            section_height: DEFAULT_SECTION_HEIGHT,
            material: MaterialModel::default(),
            grasp: None,
        }
    }
}

/// The `grasp` section. Without `finger_spec` the fingers use `design`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraspSection {
    pub finger_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finger_spec: Option<PatternSpec>,
    pub palm_radius: f64,
    pub object_radius: f64,
    pub object_mass: f64,
    pub friction_mu: f64,
    pub pressure: f64,
}

impl Default for GraspSection {
    fn default() -> Self {
        let d = GraspScenario::default();
        GraspSection {
            finger_count: d.finger_count,
            finger_spec: None,
            palm_radius: d.palm_radius,
            object_radius: d.object_radius,
            object_mass: d.object_mass,
            friction_mu: d.friction_mu,
            pressure: d.pressure,
        }
    }
}

impl Config {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            reason: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.design.validate()?;
        self.balloon.validate()?;
        require_positive("section_height_H", self.section_height)?;
        self.material.validate()?;
        if let Some(g) = self.grasp_scenario() {
            g.validate()?;
        }
        // Building an actuator runs the remaining cross-field checks.
        self.actuator()?;
        Ok(())
    }

    pub fn actuator(&self) -> Result<Actuator> {
        Actuator::new(self.design, self.balloon, self.section_height)
    }

    pub fn actuator_for(&self, spec: PatternSpec) -> Result<Actuator> {
        Actuator::new(spec, self.balloon, self.section_height)
    }

    pub fn grasp_scenario(&self) -> Option<GraspScenario> {
        self.grasp.as_ref().map(|g| GraspScenario {
            finger_count: g.finger_count,
            finger_spec: g.finger_spec.unwrap_or(self.design),
            palm_radius: g.palm_radius,
            object_radius: g.object_radius,
            object_mass: g.object_mass,
            friction_mu: g.friction_mu,
            pressure: g.pressure,
        })
    }

    pub fn parameters(&self) -> ModelParameters {
        ModelParameters::from_balloon(&self.balloon, self.section_height)
    }

    pub fn with_parameters(mut self, p: &ModelParameters) -> Self {
        self.balloon = p.balloon();
        self.section_height = p.section_height;
        self
    }
}
