//! Exhaustive design sweeps over wavelength and amplitude.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{Actuator, BalloonModel};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::gripper::{max_payload, payload_ratio, GraspScenario};
use crate::pattern::{MaterialModel, PatternSpec};
use crate::statics::{tip_push_force, STANDARD_PUSH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Free bend angle in degrees.
    MaxBendAngle,
    /// Tip reaction for the standard push, in newtons.
    MaxTipForce,
    /// Gripper payload over summed actuator mass.
    MaxPayloadRatio,
}

impl Objective {
    pub const NAMES: [&'static str; 3] = ["max_bend_angle", "max_tip_force", "max_payload_ratio"];

    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxBendAngle => Self::NAMES[0],
            Objective::MaxTipForce => Self::NAMES[1],
            Objective::MaxPayloadRatio => Self::NAMES[2],
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_bend_angle" => Ok(Objective::MaxBendAngle),
            "max_tip_force" => Ok(Objective::MaxTipForce),
            "max_payload_ratio" => Ok(Objective::MaxPayloadRatio),
            other => Err(Error::validation(
                "objective",
                format!(
                    "unknown objective '{other}', expected one of {}",
                    Self::NAMES.join(", ")
                ),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignQuery {
    pub objective: Objective,
    pub pressure: f64,
    pub wavelength_grid: Vec<f64>,
    /// `None` keeps the template amplitude.
    pub amplitude_grid: Option<Vec<f64>>,
    pub template: PatternSpec,
    pub balloon: BalloonModel,
    pub section_height: f64,
    pub material: MaterialModel,
    /// Gripper geometry for the payload objective. Its finger spec and
    /// pressure are replaced by the design under test and `pressure`.
    pub grasp: GraspScenario,
}

impl DesignQuery {
    pub fn validate(&self) -> Result<()> {
        require_non_negative("pressure", self.pressure)?;
        if self.wavelength_grid.is_empty() {
            return Err(Error::validation("wavelength_grid", "is empty"));
        }
        for &b in &self.wavelength_grid {
            require_positive("wavelength_grid", b)?;
        }
        if let Some(grid) = &self.amplitude_grid {
            if grid.is_empty() {
                return Err(Error::validation("amplitude_grid", "is empty"));
            }
            for &a in grid {
                require_positive("amplitude_grid", a)?;
            }
        }
        Ok(())
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let amps = self
            .amplitude_grid
            .clone()
            .unwrap_or_else(|| vec![self.template.amplitude_a]);
        let mut pts: Vec<(f64, f64)> = self
            .wavelength_grid
            .iter()
            .flat_map(|&b| amps.iter().map(move |&a| (b, a)))
            .collect();
        pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
        pts
    }

    pub fn design(&self, wavelength: f64, amplitude: f64) -> PatternSpec {
        self.template
            .with_wavelength(wavelength)
            .with_amplitude(amplitude)
    }
}

/// Objective value of a single design.
pub fn evaluate(query: &DesignQuery, wavelength: f64, amplitude: f64) -> Result<f64> {
    let spec = query.design(wavelength, amplitude);
    let act = Actuator::new(spec, query.balloon, query.section_height)?;
    let value = match query.objective {
        Objective::MaxBendAngle => act.state(query.pressure)?.bend_angle.to_degrees(),
        Objective::MaxTipForce => {
            tip_push_force(&act, query.pressure, STANDARD_PUSH)?.reaction_force
        }
        Objective::MaxPayloadRatio => {
            let scenario = GraspScenario {
                finger_spec: spec,
                pressure: query.pressure,
                ..query.grasp.clone()
            };
            let grasp = max_payload(&scenario, &act)?;
            payload_ratio(&scenario, grasp.max_payload, &query.material)?
        }
    };
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub wavelength: f64,
    pub amplitude: f64,
    pub value: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub objective: Objective,
    /// Sorted by wavelength, then amplitude.
    pub rows: Vec<SweepRow>,
    /// Index of the maximizing row. Ties go to the earliest row, which is
    /// the smallest wavelength.
    pub best: Option<usize>,
}

impl SweepTable {
    pub fn best_row(&self) -> Option<&SweepRow> {
        self.best.map(|i| &self.rows[i])
    }
}

pub fn sweep(query: &DesignQuery) -> Result<SweepTable> {
    query.validate()?;
    let rows: Vec<SweepRow> = query
        .points()
        .into_par_iter()
        .map(|(b, a)| match evaluate(query, b, a) {
            Ok(v) if v.is_finite() => SweepRow {
                wavelength: b,
                amplitude: a,
                value: Some(v),
                error: None,
            },
            Ok(v) => SweepRow {
                wavelength: b,
                amplitude: a,
                value: None,
                error: Some(format!("objective evaluated to {v}")),
            },
            Err(e) => SweepRow {
                wavelength: b,
                amplitude: a,
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in rows.iter().enumerate() {
        if let Some(v) = r.value {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
    }
    Ok(SweepTable {
        objective: query.objective,
        rows,
        best: best.map(|(i, _)| i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(objective: Objective, grid: Vec<f64>) -> DesignQuery {
        DesignQuery {
            objective,
            pressure: 50.0,
            wavelength_grid: grid,
            amplitude_grid: None,
            template: PatternSpec::default(),
            balloon: BalloonModel::default(),
            section_height: 7.0,
            material: MaterialModel::default(),
            grasp: GraspScenario::default(),
        }
    }

    #[test]
    fn single_point_wins() {
        let t = sweep(&query(Objective::MaxBendAngle, vec![35.0])).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.best, Some(0));
    }

    #[test]
    fn bad_points_are_rows_not_failures() {
        let t = sweep(&query(Objective::MaxTipForce, vec![30.0, 500.0])).unwrap();
        assert!(t.rows[1].error.as_deref().unwrap().contains("wavelength"));
        assert_eq!(t.best, Some(0));
    }

    #[test]
    fn parse_objective() {
        assert_eq!(
            "max_tip_force".parse::<Objective>().unwrap(),
            Objective::MaxTipForce
        );
        assert!("fastest".parse::<Objective>().is_err());
        assert!(sweep(&query(Objective::MaxBendAngle, vec![])).is_err());
    }
}
