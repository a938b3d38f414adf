//! Multi-finger gripper built from identical actuators.
//!
//! Each finger is analyzed in the plane spanned by the grip axis and its
//! base. The base sits at radial distance `palm_radius` with its tangent
//! parallel to the axis, and the finger curls toward the axis, so the radial
//! coordinate of a backbone point is `palm_radius - y(s)`. The object is a
//! cylinder coaxial with the grip axis, long enough that only its radius
//! matters.

use serde::{Deserialize, Serialize};

use crate::equilibrium::Actuator;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::kinematics::arc_point;
use crate::pattern::{skin_mass, MaterialModel, PatternSpec};
use crate::roots::{bisect, last_true};
use crate::statics::constrained_reaction;
use crate::units::GRAVITY_N_PER_G;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspScenario {
    pub finger_count: usize,
    pub finger_spec: PatternSpec,
    /// Radial offset of the finger bases from the grip axis (mm).
    pub palm_radius: f64,
    pub object_radius: f64,
    /// g.
    pub object_mass: f64,
    pub friction_mu: f64,
    /// kPa.
    pub pressure: f64,
}

impl Default for GraspScenario {
    fn default() -> Self {
        GraspScenario {
            finger_count: 3,
            finger_spec: PatternSpec::default(),
            palm_radius: 37.5,
            object_radius: 25.0,
            object_mass: 35.055,
            friction_mu: 0.8,
            pressure: 50.0,
        }
    }
}

impl GraspScenario {
    pub fn validate(&self) -> Result<()> {
        if self.finger_count < 2 {
            return Err(Error::validation(
                "finger_count",
                format!("{} is below the minimum of 2", self.finger_count),
            ));
        }
        self.finger_spec.validate()?;
        require_positive("palm_radius", self.palm_radius)?;
        require_positive("object_radius", self.object_radius)?;
        require_non_negative("object_mass", self.object_mass)?;
        require_non_negative("pressure", self.pressure)?;
        require_positive("friction_mu", self.friction_mu)?;
        if self.friction_mu > 2.0 {
            return Err(Error::validation(
                "friction_mu",
                format!("{} exceeds 2", self.friction_mu),
            ));
        }
        Ok(())
    }

    /// Radial distance a finger must travel to reach the object surface.
    pub fn gap(&self) -> f64 {
        self.palm_radius - self.object_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraspMode {
    Friction,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraspResult {
    /// Backbone coordinate of the contact per finger (mm).
    pub contact_arclength: Vec<Option<f64>>,
    /// N per finger.
    pub normal_force: Vec<f64>,
    /// g.
    pub max_payload: f64,
    pub liftable: bool,
    pub mode: GraspMode,
}

/// Bend angle at which `y_tip = L(1 - cos φ)/φ` peaks, the root of
/// `φ sin φ = 1 - cos φ` in (2, 3).
fn peak_reach_angle() -> f64 {
    bisect(|p| p * p.sin() - (1.0 - p.cos()), 2.0, 3.0, 0.0)
}

/// Largest inward deflection reached anywhere on a finger bent by `phi`.
fn max_inward_reach(length: f64, phi: f64) -> f64 {
    if phi <= std::f64::consts::PI {
        arc_point(length, phi, length).y
    } else {
        2.0 * length / phi
    }
}

/// Smallest arclength at which a finger bent by `phi` reaches inward by
/// `gap`, if any.
pub fn contact_on_backbone(length: f64, phi: f64, gap: f64) -> Option<f64> {
    if gap <= 0.0 || phi <= 0.0 {
        return None;
    }
    // y(s) rises monotonically until the tangent turns past π.
    let s_rise = if phi <= std::f64::consts::PI {
        length
    } else {
        length * std::f64::consts::PI / phi
    };
    if arc_point(length, phi, s_rise).y < gap {
        return None;
    }
    Some(last_true(
        |s| arc_point(length, phi, s).y < gap,
        0.0,
        s_rise,
        0.0,
    ))
}

/// Free-pose contact arclength for one finger, or `None`.
pub fn find_contact(scenario: &GraspScenario, act: &Actuator) -> Result<Option<f64>> {
    scenario.validate()?;
    let phi = act.state(scenario.pressure)?.bend_angle;
    Ok(contact_on_backbone(
        act.pattern().total_length,
        phi,
        scenario.gap(),
    ))
}

/// Bend angle at which a finger closing from straight first touches.
pub fn first_touch_angle(length: f64, gap: f64, phi_free: f64) -> Option<f64> {
    contact_on_backbone(length, phi_free, gap)?;
    let hi = phi_free.min(peak_reach_angle());
    Some(last_true(
        |p| max_inward_reach(length, p) < gap,
        0.0,
        hi,
        0.0,
    ))
}

/// Normal force a finger presses with when held at its first-touch angle,
/// with the object contact at arclength `contact_s`.
pub fn squeeze_force(scenario: &GraspScenario, act: &Actuator, contact_s: f64) -> Result<f64> {
    scenario.validate()?;
    require_positive("contact_arclength", contact_s)?;
    let length = act.pattern().total_length;
    let phi_free = act.state(scenario.pressure)?.bend_angle;
    let Some(phi_c) = first_touch_angle(length, scenario.gap(), phi_free) else {
        return Ok(0.0);
    };
    constrained_reaction(act, scenario.pressure, phi_c, contact_s)
}

/// Friction-limited payload of the whole gripper.
pub fn max_payload(scenario: &GraspScenario, act: &Actuator) -> Result<GraspResult> {
    let n = scenario.finger_count;
    let Some(s) = find_contact(scenario, act)? else {
        return Ok(GraspResult {
            contact_arclength: vec![None; n],
            normal_force: vec![0.0; n],
            max_payload: 0.0,
            liftable: false,
            mode: GraspMode::None,
        });
    };
    // Identical fingers around a centered object see identical loads.
    let force = squeeze_force(scenario, act, s)?;
    let payload = payload_from_forces(scenario.friction_mu, &vec![force; n]);
    Ok(GraspResult {
        contact_arclength: vec![Some(s); n],
        normal_force: vec![force; n],
        max_payload: payload,
        liftable: payload >= scenario.object_mass,
        mode: GraspMode::Friction,
    })
}

pub fn payload_from_forces(mu: f64, forces: &[f64]) -> f64 {
    mu * forces.iter().sum::<f64>() / GRAVITY_N_PER_G
}

/// Payload in units of the summed actuator mass.
pub fn payload_ratio(scenario: &GraspScenario, payload: f64, mat: &MaterialModel) -> Result<f64> {
    let own = scenario.finger_count as f64 * skin_mass(&scenario.finger_spec, mat)?;
    Ok(payload / own)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_angle() {
        let p = peak_reach_angle();
        assert!((p * p.sin() - (1.0 - p.cos())).abs() < 1e-12);
        assert!((2.3..2.4).contains(&p));
    }

    #[test]
    fn straight_finger_never_touches() {
        assert_eq!(contact_on_backbone(140.0, 0.0, 10.0), None);
        assert_eq!(contact_on_backbone(140.0, 0.5, -1.0), None);
    }

    #[test]
    fn contact_point_lies_on_surface() {
        let s = contact_on_backbone(140.0, 0.61, 25.0).unwrap();
        assert!(s > 0.0 && s < 140.0);
        assert!((arc_point(140.0, 0.61, s).y - 25.0).abs() < 1e-9);
    }

    #[test]
    fn first_touch_happens_at_tip() {
        let phi = first_touch_angle(140.0, 12.0, 0.6).unwrap();
        assert!(phi < 0.6);
        assert!((arc_point(140.0, phi, 140.0).y - 12.0).abs() < 1e-9);
        assert_eq!(first_touch_angle(140.0, 100.0, 0.6), None);
    }

    #[test]
    fn payload_arithmetic() {
        let p = payload_from_forces(0.8, &[0.14, 0.14, 0.14]);
        assert!((p - 0.8 * 0.42 / 0.0098).abs() < 1e-9);
        assert!((p - 34.3).abs() < 0.05);
    }

    #[test]
    fn scenario_validation() {
        let bad = GraspScenario {
            finger_count: 1,
            ..GraspScenario::default()
        };
        assert!(bad
            .validate()
            .unwrap_err()
            .to_string()
            .contains("finger_count"));
        let slippery = GraspScenario {
            friction_mu: 2.5,
            ..GraspScenario::default()
        };
        assert!(slippery.validate().is_err());
    }
}
