//! Constant-curvature backbone.
//!
//! The contracting rim and the flat fold layer are separated by an effective
//! section height `H`. Under constant curvature their length difference
//! equals `H·φ`, so the bend angle is `φ = Δ/H`. The backbone starts at the
//! origin heading along +x and curls toward +y.

use serde::Serialize;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::pattern::PatternSpec;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackbonePose {
    pub bend_angle: f64,
    /// `None` for a straight backbone.
    pub arc_radius: Option<f64>,
    pub tip_position: Point2,
    pub tip_tangent: Point2,
    pub polyline: Vec<Point2>,
}

pub fn bend_angle(contraction_total: f64, section_height: f64) -> Result<f64> {
    require_positive("section_height_H", section_height)?;
    require_non_negative("contraction_total", contraction_total)?;
    Ok(contraction_total / section_height)
}

/// Below this `|φ·s/L|` the arc point uses its Taylor expansion.
const SMALL_TURN: f64 = 1e-4;

/// Point at arclength `s` on an arc of total length `length` and bend `phi`.
pub fn arc_point(length: f64, phi: f64, s: f64) -> Point2 {
    let u = phi * s / length;
    if u.abs() < SMALL_TURN {
        let u2 = u * u;
        Point2::new(s * (1.0 - u2 / 6.0), s * u * (0.5 - u2 / 24.0))
    } else {
        let r = length / phi;
        let half = (0.5 * u).sin();
        Point2::new(r * u.sin(), 2.0 * r * half * half)
    }
}

pub fn backbone(spec: &PatternSpec, bend_angle: f64, n_points: usize) -> Result<BackbonePose> {
    spec.validate()?;
    if n_points < 2 {
        return Err(Error::validation(
            "n_points",
            format!("{n_points} is below the minimum of 2"),
        ));
    }
    if !bend_angle.is_finite() {
        return Err(Error::validation("bend_angle", "not finite"));
    }
    let l = spec.total_length;
    let polyline = (0..n_points)
        .map(|i| arc_point(l, bend_angle, l * i as f64 / (n_points - 1) as f64))
        .collect();
    Ok(BackbonePose {
        bend_angle,
        arc_radius: (bend_angle != 0.0).then(|| l / bend_angle.abs()),
        tip_position: arc_point(l, bend_angle, l),
        tip_tangent: Point2::new(bend_angle.cos(), bend_angle.sin()),
        polyline,
    })
}
