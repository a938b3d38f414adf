//! Load-bearing behavior through the total potential Π(φ).
//!
//! The bend angle φ is a monotone function of the shared wave angle θ, so Π
//! can be written over φ by inverting that map. Loads enter as constraints on
//! φ, and reactions are read off as generalized forces `-dΠ/dφ` divided by a
//! moment arm.

use serde::Serialize;

use crate::equilibrium::Actuator;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::pattern::{skin_mass, MaterialModel, PatternSpec};
use crate::roots::bisect;
use crate::units::GRAVITY_N_PER_G;

/// Step for the first derivative of Π (rad).
pub const FIRST_DIFF_STEP: f64 = 1e-5;
/// Step for the second derivative of Π (rad).
pub const SECOND_DIFF_STEP: f64 = 1e-4;
/// Push used by the tip-force experiment (mm).
pub const STANDARD_PUSH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TipLoadResult {
    pub pressure: f64,
    pub free_bend_angle: f64,
    pub push_displacement: f64,
    /// Bend angle held by the push (rad).
    pub constrained_bend_angle: f64,
    /// N. Positive when the actuator presses back against the push.
    pub reaction_force: f64,
    /// N·mm/rad.
    pub base_stiffness: f64,
}

/// Wave angle that produces bend angle `phi`.
pub fn theta_of_phi(act: &Actuator, phi: f64) -> Result<f64> {
    let phi_max = act.phi_max();
    if !(0.0..=phi_max).contains(&phi) {
        return Err(Error::Domain {
            quantity: "phi",
            value: phi,
            lo: 0.0,
            hi: phi_max,
        });
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    if phi == phi_max {
        return Ok(act.theta_max());
    }
    Ok(bisect(
        |t| act.bend_for_theta(t) - phi,
        0.0,
        act.theta_max(),
        0.0,
    ))
}

/// Π(φ) in mJ.
pub fn total_potential(act: &Actuator, pressure: f64, phi: f64) -> Result<f64> {
    require_non_negative("pressure", pressure)?;
    Ok(act.potential_at_theta(pressure, theta_of_phi(act, phi)?))
}

/// dΠ/dφ by central differences, falling back to one-sided ones at the
/// ends of the reachable range.
pub fn potential_slope(act: &Actuator, pressure: f64, phi: f64) -> Result<f64> {
    let (lo, hi) = stencil(act, phi, FIRST_DIFF_STEP);
    Ok((total_potential(act, pressure, hi)? - total_potential(act, pressure, lo)?) / (hi - lo))
}

/// d²Π/dφ², using a shifted three-point stencil near the ends.
pub fn potential_curvature(act: &Actuator, pressure: f64, phi: f64) -> Result<f64> {
    let phi_max = act.phi_max();
    let step = SECOND_DIFF_STEP.min(0.5 * phi_max);
    let mid = phi.clamp(step, phi_max - step);
    let f = |x: f64| total_potential(act, pressure, x);
    Ok((f(mid + step)? - 2.0 * f(mid)? + f(mid - step)?) / (step * step))
}

fn stencil(act: &Actuator, phi: f64, h: f64) -> (f64, f64) {
    let phi_max = act.phi_max();
    ((phi - h).max(0.0), (phi + h).min(phi_max))
}

/// Reaction when the bend angle is held at `phi_c` by a contact at moment
/// arm `arm` (mm). Zero when `phi_c` is the unconstrained pose.
pub fn constrained_reaction(act: &Actuator, pressure: f64, phi_c: f64, arm: f64) -> Result<f64> {
    require_positive("moment_arm", arm)?;
    let free = act.state(pressure)?.bend_angle;
    if phi_c >= free {
        return Ok(0.0);
    }
    Ok((-potential_slope(act, pressure, phi_c)? / arm).max(0.0))
}

/// Force read by a sensor that pushes the tip back by `push` mm.
pub fn tip_push_force(act: &Actuator, pressure: f64, push: f64) -> Result<TipLoadResult> {
    require_non_negative("push", push)?;
    let arm = act.pattern().total_length;
    let free = act.state(pressure)?.bend_angle;
    let phi_c = (free - push / arm).max(0.0);
    Ok(TipLoadResult {
        pressure,
        free_bend_angle: free,
        push_displacement: push,
        constrained_bend_angle: phi_c,
        reaction_force: constrained_reaction(act, pressure, phi_c, arm)?,
        base_stiffness: potential_curvature(act, pressure, phi_c)?,
    })
}

/// Ratio of a force to the weight of one actuator skin.
pub fn force_to_weight(spec: &PatternSpec, mat: &MaterialModel, force: f64) -> Result<f64> {
    require_non_negative("force", force)?;
    Ok(force / (skin_mass(spec, mat)? * GRAVITY_N_PER_G))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::BalloonModel;

    fn design(b: f64) -> Actuator {
        Actuator::new(
            PatternSpec::default().with_wavelength(b),
            BalloonModel::default(),
            7.0,
        )
        .unwrap()
    }

    #[test]
    fn inverse_map_round_trips() {
        let a = design(30.0);
        for &t in &[1e-3, 0.1, 0.4, a.theta_max() * 0.99] {
            let phi = a.bend_for_theta(t);
            let back = theta_of_phi(&a, phi).unwrap();
            assert!((back - t).abs() < 1e-10, "{t} -> {back}");
        }
        assert!(theta_of_phi(&a, -0.1).is_err());
        assert!(theta_of_phi(&a, a.phi_max() + 1e-3).is_err());
    }

    #[test]
    fn potential_without_pressure_is_elastic() {
        let a = design(30.0);
        assert_eq!(total_potential(&a, 0.0, 0.0).unwrap(), 0.0);
        let mut last = 0.0;
        for i in 1..20 {
            let v = total_potential(&a, 0.0, a.phi_max() * i as f64 / 20.0).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn zero_push_reads_zero() {
        for b in [25.0, 40.0] {
            let r = tip_push_force(&design(b), 50.0, 0.0).unwrap();
            assert_eq!(r.reaction_force, 0.0);
        }
    }

    #[test]
    fn push_beyond_free_pose_clamps_to_straight() {
        let a = design(30.0);
        let r = tip_push_force(&a, 50.0, 1e3).unwrap();
        assert_eq!(r.constrained_bend_angle, 0.0);
        assert!(r.reaction_force > 0.0);
    }

    #[test]
    fn below_onset_has_no_force() {
        let r = tip_push_force(&design(30.0), 10.0, 2.0).unwrap();
        assert_eq!(r.reaction_force, 0.0);
        assert!(r.base_stiffness > 0.0);
    }

    #[test]
    fn ratio_arithmetic() {
        let m = MaterialModel::default();
        let s = PatternSpec::default();
        assert_eq!(force_to_weight(&s, &m, 0.0).unwrap(), 0.0);
        let mass = skin_mass(&s, &m).unwrap();
        let r = force_to_weight(&s, &m, 0.070).unwrap();
        assert!((r - 0.070 / (mass * 0.0098)).abs() < 1e-12);
    }
}
