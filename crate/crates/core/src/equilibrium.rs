//! Quasi-static inflation equilibrium.
//!
//! Every wave carries the same bulge half-angle θ. Pneumatic work on the
//! wave (above an onset pressure) is balanced by a torsional spring per wave
//! whose stiffness is `kappa0 + kappa1 / b`.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::kinematics::bend_angle;
use crate::pattern::PatternSpec;
use crate::pouch::{self, PouchSegment};
use crate::roots::bisect;
use crate::units::KPA_MM3_TO_MJ;

/// Bracket width at which the θ bisection stops.
const THETA_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BalloonModel {
    /// kPa. Below it the balloon only fills the main body.
    pub onset_pressure: f64,
    /// N·mm/rad.
    pub kappa0: f64,
    /// N·mm²/rad.
    pub kappa1: f64,
}

impl Default for BalloonModel {
    fn default() -> Self {
        BalloonModel {
            onset_pressure: 20.0,
            kappa0: 280.0,
            kappa1: 500.0,
        }
    }
}

impl BalloonModel {
    pub fn validate(&self) -> Result<()> {
        require_non_negative("onset_pressure", self.onset_pressure)?;
        require_non_negative("kappa0", self.kappa0)?;
        require_non_negative("kappa1", self.kappa1)?;
        if self.kappa0 + self.kappa1 <= 0.0 {
            return Err(Error::validation("kappa0", "kappa0 + kappa1 must be > 0"));
        }
        Ok(())
    }

    /// Per-wave torsional stiffness for wavelength `b` (N·mm/rad).
    pub fn stiffness(&self, b: f64) -> f64 {
        self.kappa0 + self.kappa1 / b
    }

    /// Pressure in excess of the onset, never negative.
    pub fn effective_pressure(&self, pressure: f64) -> f64 {
        (pressure - self.onset_pressure).max(0.0)
    }
}

/// The segment a single wave of `spec` inflates into.
pub fn pouch_segment(spec: &PatternSpec) -> Result<PouchSegment> {
    spec.validate()?;
    PouchSegment::new(spec.wavelength_b, spec.width, spec.amplitude_a).map_err(|e| match e {
        Error::Validation { reason, .. } => Error::validation("amplitude_a", reason),
        other => other,
    })
}

/// A validated actuator with its per-design constants cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Actuator {
    pattern: PatternSpec,
    balloon: BalloonModel,
    section_height: f64,
    cache: Cached,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cached {
    waves: usize,
    theta_max: f64,
    stiffness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActuatorState {
    pub pressure: f64,
    pub theta: f64,
    pub fill_fraction: f64,
    /// mm.
    pub contraction_total: f64,
    /// rad.
    pub bend_angle: f64,
    /// mJ.
    pub pneumatic_energy: f64,
    /// mJ.
    pub elastic_energy: f64,
}

impl Actuator {
    pub fn new(pattern: PatternSpec, balloon: BalloonModel, section_height: f64) -> Result<Self> {
        balloon.validate()?;
        require_positive("section_height_H", section_height)?;
        let segment = pouch_segment(&pattern)?;
        let cache = Cached {
            waves: pattern.waves(),
            theta_max: pouch::theta_max(&segment),
            stiffness: balloon.stiffness(pattern.wavelength_b),
        };
        Ok(Actuator {
            pattern,
            balloon,
            section_height,
            cache,
        })
    }

    pub fn pattern(&self) -> &PatternSpec {
        &self.pattern
    }

    pub fn balloon(&self) -> &BalloonModel {
        &self.balloon
    }

    /// Effective section height H (mm).
    pub fn section_height(&self) -> f64 {
        self.section_height
    }

    pub fn waves(&self) -> usize {
        self.cache.waves
    }

    pub fn theta_max(&self) -> f64 {
        self.cache.theta_max
    }

    pub fn stiffness(&self) -> f64 {
        self.cache.stiffness
    }

    fn b(&self) -> f64 {
        self.pattern.wavelength_b
    }

    /// Net generalized torque on one wave at angle `theta`, in N·mm.
    /// Positive means the wave wants to open further.
    pub fn residual(&self, pressure: f64, theta: f64) -> f64 {
        let b = self.b();
        self.balloon.effective_pressure(pressure)
            * self.pattern.width
            * b
            * b
            * pouch::area_prime_unit(theta)
            * KPA_MM3_TO_MJ
            - self.stiffness() * theta
    }

    pub fn solve_theta(&self, pressure: f64) -> Result<f64> {
        check_pressure(pressure)?;
        if self.balloon.effective_pressure(pressure) == 0.0 {
            return Ok(0.0);
        }
        let t_max = self.theta_max();
        if self.residual(pressure, t_max) >= 0.0 {
            return Ok(t_max);
        }
        Ok(bisect(
            |t| self.residual(pressure, t),
            0.0,
            t_max,
            THETA_TOL,
        ))
    }

    /// Bend angle produced by a uniform per-wave angle θ.
    pub fn bend_for_theta(&self, theta: f64) -> f64 {
        self.waves() as f64 * self.b() * pouch::eps(theta) / self.section_height
    }

    /// Largest reachable bend angle (all waves at their cap).
    pub fn phi_max(&self) -> f64 {
        self.bend_for_theta(self.theta_max())
    }

    /// Total potential Π(θ) in mJ for uniform angle θ.
    pub fn potential_at_theta(&self, pressure: f64, theta: f64) -> f64 {
        let n = self.waves() as f64;
        let b = self.b();
        let work = self.balloon.effective_pressure(pressure)
            * self.pattern.width
            * b
            * b
            * pouch::area_unit(theta)
            * KPA_MM3_TO_MJ;
        n * (0.5 * self.stiffness() * theta * theta - work)
    }

    pub fn state(&self, pressure: f64) -> Result<ActuatorState> {
        let theta = self.solve_theta(pressure)?;
        let n = self.waves() as f64;
        let b = self.b();
        let contraction_total = n * b * pouch::eps(theta);
        let area = b * b * pouch::area_unit(theta);
        Ok(ActuatorState {
            pressure,
            theta,
            fill_fraction: (theta / self.theta_max()).clamp(0.0, 1.0),
            contraction_total,
            bend_angle: bend_angle(contraction_total, self.section_height)?,
            pneumatic_energy: pressure * self.pattern.width * n * area * KPA_MM3_TO_MJ,
            elastic_energy: 0.5 * self.stiffness() * n * theta * theta,
        })
    }

    pub fn sweep(&self, pressures: &[f64]) -> Result<Vec<ActuatorState>> {
        pressures.iter().map(|&p| self.state(p)).collect()
    }

    /// Pressure at which θ first reaches its cap, or `None` when the cap
    /// sits at the half-circle and is only approached asymptotically.
    pub fn saturation_pressure(&self) -> Option<f64> {
        let t_max = self.theta_max();
        if t_max >= std::f64::consts::FRAC_PI_2 {
            return None;
        }
        let b = self.b();
        let drive = self.pattern.width * b * b * pouch::area_prime_unit(t_max) * KPA_MM3_TO_MJ;
        (drive > 0.0).then(|| self.balloon.onset_pressure + self.stiffness() * t_max / drive)
    }
}

fn check_pressure(pressure: f64) -> Result<()> {
    require_non_negative("pressure", pressure)
}

pub fn solve_theta(spec: &PatternSpec, balloon: &BalloonModel, pressure: f64) -> Result<f64> {
    // H only enters the bend angle, so any positive value will do here.
    Actuator::new(*spec, *balloon, 1.0)?.solve_theta(pressure)
}

pub fn actuator_state(
    spec: &PatternSpec,
    balloon: &BalloonModel,
    section_height: f64,
    pressure: f64,
) -> Result<ActuatorState> {
    Actuator::new(*spec, *balloon, section_height)?.state(pressure)
}

pub fn pressure_sweep(
    spec: &PatternSpec,
    balloon: &BalloonModel,
    section_height: f64,
    pressures: &[f64],
) -> Result<Vec<ActuatorState>> {
    Actuator::new(*spec, *balloon, section_height)?.sweep(pressures)
}

pub fn saturation_pressure(spec: &PatternSpec, balloon: &BalloonModel) -> Result<Option<f64>> {
    Ok(Actuator::new(*spec, *balloon, 1.0)?.saturation_pressure())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(b: f64) -> Actuator {
        Actuator::new(
            PatternSpec::default().with_wavelength(b),
            BalloonModel::default(),
            7.0,
        )
        .unwrap()
    }

    #[test]
    fn below_onset_is_flat() {
        let a = design(30.0);
        assert_eq!(a.solve_theta(0.0).unwrap(), 0.0);
        assert_eq!(a.solve_theta(10.0).unwrap(), 0.0);
        assert_eq!(a.solve_theta(20.0).unwrap(), 0.0);
        let s = a.state(0.0).unwrap();
        assert_eq!(s.bend_angle, 0.0);
        assert_eq!(s.pneumatic_energy, 0.0);
        assert_eq!(s.elastic_energy, 0.0);
    }

    #[test]
    fn interior_solution_balances() {
        let a = design(25.0);
        let t = a.solve_theta(50.0).unwrap();
        assert!(t > 0.0 && t < a.theta_max());
        let scale = a.stiffness() * a.theta_max();
        assert!(a.residual(50.0, t).abs() <= 1e-6 * scale);
    }

    #[test]
    fn saturates_above_psat() {
        let a = design(40.0);
        let p = a.saturation_pressure().unwrap();
        assert_eq!(a.solve_theta(p + 1.0).unwrap(), a.theta_max());
        assert!(a.solve_theta(p - 1.0).unwrap() < a.theta_max());
    }

    #[test]
    fn half_circle_cap_never_saturates() {
        let spec = PatternSpec::default().with_amplitude(10.0);
        let a = Actuator::new(spec, BalloonModel::default(), 7.0).unwrap();
        assert_eq!(a.theta_max(), std::f64::consts::FRAC_PI_2);
        assert_eq!(a.saturation_pressure(), None);
        assert!(a.solve_theta(1e4).unwrap() < a.theta_max());
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = design(30.0);
        assert!(a.solve_theta(-1.0).is_err());
        assert!(a.solve_theta(f64::NAN).is_err());
        let bad = BalloonModel {
            kappa0: 0.0,
            kappa1: 0.0,
            ..BalloonModel::default()
        };
        assert!(Actuator::new(PatternSpec::default(), bad, 7.0).is_err());
        assert!(Actuator::new(PatternSpec::default(), BalloonModel::default(), 0.0).is_err());
        let flat = PatternSpec::default().with_amplitude(0.0);
        let err = Actuator::new(flat, BalloonModel::default(), 7.0).unwrap_err();
        assert!(err.to_string().contains("amplitude_a"));
    }

    #[test]
    fn sweep_preserves_order() {
        let a = design(35.0);
        let fwd = a.sweep(&[10.0, 30.0, 50.0]).unwrap();
        let rev = a.sweep(&[50.0, 30.0, 10.0]).unwrap();
        assert_eq!(fwd[0], rev[2]);
        assert_eq!(fwd[2], rev[0]);
        assert!(a.sweep(&[]).unwrap().is_empty());
    }
}
