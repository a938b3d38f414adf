//! Skin geometry and fabrication outputs.
//!
//! One skin half is a strip with a straight fold edge on `y = 0` and a
//! stitched rim at `y = width`. Over the wavy region the rim dips inward
//! along `width - a·(1 - cos(2πx'/b))/2`, where `x'` is measured from the end
//! of the straight root tail, so every wave starts and ends flush with the
//! straight sections.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::kinematics::Point2;
use crate::units::KG_M3_MM3_TO_G;

/// Rim samples per wave used for fabrication output.
pub const EXPORT_SAMPLES_PER_WAVE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternSpec {
    pub total_length: f64,
    pub width: f64,
    pub wavelength_b: f64,
    pub amplitude_a: f64,
    /// Straight root section ahead of the first wave.
    pub straight_tail: f64,
    pub seam_margin: f64,
}

impl Default for PatternSpec {
    fn default() -> Self {
        PatternSpec {
            total_length: 140.0,
            width: 20.0,
            wavelength_b: 30.0,
            amplitude_a: 6.0,
            straight_tail: 20.0,
            seam_margin: 3.0,
        }
    }
}

impl PatternSpec {
    pub fn with_wavelength(self, wavelength_b: f64) -> Self {
        PatternSpec {
            wavelength_b,
            ..self
        }
    }

    pub fn with_amplitude(self, amplitude_a: f64) -> Self {
        PatternSpec {
            amplitude_a,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("total_length", self.total_length)?;
        require_positive("width", self.width)?;
        require_positive("wavelength_b", self.wavelength_b)?;
        require_non_negative("amplitude_a", self.amplitude_a)?;
        require_positive("straight_tail", self.straight_tail)?;
        require_positive("seam_margin", self.seam_margin)?;
        if self.straight_tail >= self.total_length {
            return Err(Error::validation(
                "straight_tail",
                format!(
                    "{} leaves no wavy region in total_length {}",
                    self.straight_tail, self.total_length
                ),
            ));
        }
        if self.wavelength_b > self.wavy_region_length() {
            return Err(Error::validation(
                "wavelength_b",
                format!(
                    "{} exceeds the wavy region length {}",
                    self.wavelength_b,
                    self.wavy_region_length()
                ),
            ));
        }
        if self.amplitude_a >= self.width {
            return Err(Error::validation(
                "amplitude_a",
                format!(
                    "{} must be smaller than width {}",
                    self.amplitude_a, self.width
                ),
            ));
        }
        if self.seam_margin >= self.width - self.amplitude_a {
            return Err(Error::validation(
                "seam_margin",
                format!(
                    "{} does not fit inside the narrowest section {}",
                    self.seam_margin,
                    self.width - self.amplitude_a
                ),
            ));
        }
        Ok(())
    }

    pub fn wavy_region_length(&self) -> f64 {
        self.total_length - self.straight_tail
    }

    pub(crate) fn waves(&self) -> usize {
        ((self.wavy_region_length() / self.wavelength_b).floor() as usize).max(1)
    }

    /// Length actually occupied by whole waves.
    pub fn wavy_length(&self) -> f64 {
        self.waves() as f64 * self.wavelength_b
    }

    /// Rim `y` coordinate at axial position `x`.
    pub fn rim_height(&self, x: f64) -> f64 {
        let start = self.straight_tail;
        let end = start + self.wavy_length();
        if x <= start || x >= end {
            return self.width;
        }
        let phase = 2.0 * PI * (x - start) / self.wavelength_b;
        self.width - 0.5 * self.amplitude_a * (1.0 - phase.cos())
    }

    /// `dy/dx` of the rim.
    pub fn rim_slope(&self, x: f64) -> f64 {
        let start = self.straight_tail;
        let end = start + self.wavy_length();
        if x <= start || x >= end {
            return 0.0;
        }
        let k = 2.0 * PI / self.wavelength_b;
        -0.5 * self.amplitude_a * k * (k * (x - start)).sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialModel {
    /// mm
    pub plastic_thickness: f64,
    /// kg/m³
    pub plastic_density: f64,
    /// USD per skin
    pub plastic_unit_cost: f64,
    /// g
    pub balloon_mass: f64,
    /// USD per balloon
    pub balloon_unit_cost: f64,
}

impl Default for MaterialModel {
    fn default() -> Self {
        MaterialModel {
            plastic_thickness: 0.08,
            plastic_density: 930.0,
            plastic_unit_cost: 0.21,
            balloon_mass: 1.03,
            balloon_unit_cost: 0.011,
        }
    }
}

impl MaterialModel {
    pub fn validate(&self) -> Result<()> {
        require_positive("plastic_thickness", self.plastic_thickness)?;
        require_positive("plastic_density", self.plastic_density)?;
        require_non_negative("plastic_unit_cost", self.plastic_unit_cost)?;
        require_positive("balloon_mass", self.balloon_mass)?;
        require_non_negative("balloon_unit_cost", self.balloon_unit_cost)?;
        Ok(())
    }
}

pub fn wave_count(spec: &PatternSpec) -> Result<usize> {
    spec.validate()?;
    Ok(spec.waves())
}

/// Sampled wavy section of the rim, root to tip, both ends at full width.
fn wave_rim(spec: &PatternSpec, samples_per_wave: usize) -> Vec<Point2> {
    let start = spec.straight_tail;
    let end = start + spec.wavy_length();
    let n = spec.waves() * samples_per_wave;
    (0..=n)
        .map(|i| {
            let x = start + (end - start) * i as f64 / n as f64;
            Point2::new(x, spec.rim_height(x))
        })
        .collect()
}

fn check_samples(samples_per_wave: usize) -> Result<()> {
    if samples_per_wave < 8 {
        return Err(Error::validation(
            "samples_per_wave",
            format!("{samples_per_wave} is below the minimum of 8"),
        ));
    }
    Ok(())
}

/// Closed outline of one skin half, counter-clockwise from the root corner of
/// the fold edge. The first vertex is repeated at the end.
pub fn rim_polyline(spec: &PatternSpec, samples_per_wave: usize) -> Result<Vec<Point2>> {
    spec.validate()?;
    check_samples(samples_per_wave)?;
    let l = spec.total_length;
    let mut pts = vec![
        Point2::new(0.0, 0.0),
        Point2::new(l, 0.0),
        Point2::new(l, spec.width),
    ];
    for p in wave_rim(spec, samples_per_wave).into_iter().rev() {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    pts.push(Point2::new(0.0, spec.width));
    pts.push(Point2::new(0.0, 0.0));
    Ok(pts)
}

/// Shoelace area of a closed polygon (first vertex repeated at the end).
pub fn polygon_area(pts: &[Point2]) -> f64 {
    0.5 * pts
        .windows(2)
        .map(|w| w[0].x * w[1].y - w[1].x * w[0].y)
        .sum::<f64>()
}

pub fn polyline_length(pts: &[Point2]) -> f64 {
    pts.windows(2).map(|w| w[0].distance(&w[1])).sum()
}

/// Polyline length of the sampled wavy rim section alone.
pub fn rim_wave_arc_length(spec: &PatternSpec, samples_per_wave: usize) -> Result<f64> {
    spec.validate()?;
    check_samples(samples_per_wave)?;
    Ok(polyline_length(&wave_rim(spec, samples_per_wave)))
}

/// Exact area of the outline: each full wave removes `a·b/2` from the strip.
pub fn outline_area(spec: &PatternSpec) -> f64 {
    spec.total_length * spec.width - 0.5 * spec.amplitude_a * spec.wavy_length()
}

/// Plastic (two folded layers) plus balloon, in grams.
pub fn skin_mass(spec: &PatternSpec, mat: &MaterialModel) -> Result<f64> {
    spec.validate()?;
    mat.validate()?;
    Ok(plastic_mass(spec, mat) + mat.balloon_mass)
}

pub(crate) fn plastic_mass(spec: &PatternSpec, mat: &MaterialModel) -> f64 {
    2.0 * outline_area(spec) * mat.plastic_thickness * mat.plastic_density * KG_M3_MM3_TO_G
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BomItem {
    pub item: String,
    pub cost_usd: f64,
    pub mass_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BillOfMaterials {
    pub items: Vec<BomItem>,
    pub total_cost_usd: f64,
    pub total_mass_g: f64,
}

pub fn bill_of_materials(spec: &PatternSpec, mat: &MaterialModel) -> Result<BillOfMaterials> {
    spec.validate()?;
    mat.validate()?;
    let items = vec![
        BomItem {
            item: "plastic".into(),
            cost_usd: mat.plastic_unit_cost,
            mass_g: plastic_mass(spec, mat),
        },
        BomItem {
            item: "balloon".into(),
            cost_usd: mat.balloon_unit_cost,
            mass_g: mat.balloon_mass,
        },
    ];
    let total_cost_usd = items.iter().map(|i| i.cost_usd).sum();
    let total_mass_g = items.iter().map(|i| i.mass_g).sum();
    Ok(BillOfMaterials {
        items,
        total_cost_usd,
        total_mass_g,
    })
}

/// Stitch line: the rim and the tip edge, offset toward the interior by
/// `seam_margin`. Runs from the root end of the rim to the fold at the tip.
pub fn seam_polyline(spec: &PatternSpec, samples_per_wave: usize) -> Result<Vec<Point2>> {
    let outline = rim_polyline(spec, samples_per_wave)?;
    // outline = fold(2) + tip corner + rim ... + root corner + close.
    // Path along the stitched edges with the interior on the right.
    let mut path: Vec<Point2> = outline[2..outline.len() - 1].to_vec();
    path.reverse(); // root end of the rim first
    path.push(Point2::new(spec.total_length, 0.0));
    Ok(offset_right(&path, spec.seam_margin))
}

/// Mitred offset of an open polyline to the right of its direction.
fn offset_right(path: &[Point2], d: f64) -> Vec<Point2> {
    let normal = |a: &Point2, b: &Point2| {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len = dx.hypot(dy);
        Point2::new(dy / len, -dx / len)
    };
    let n = path.len();
    (0..n)
        .map(|i| {
            let p = path[i];
            let offset = if i == 0 {
                let m = normal(&path[0], &path[1]);
                Point2::new(m.x * d, m.y * d)
            } else if i == n - 1 {
                let m = normal(&path[n - 2], &path[n - 1]);
                Point2::new(m.x * d, m.y * d)
            } else {
                let m1 = normal(&path[i - 1], &path[i]);
                let m2 = normal(&path[i], &path[i + 1]);
                let (sx, sy) = (m1.x + m2.x, m1.y + m2.y);
                let len = sx.hypot(sy);
                let (ux, uy) = (sx / len, sy / len);
                let cos_half = ux * m1.x + uy * m1.y;
                Point2::new(ux * d / cos_half, uy * d / cos_half)
            };
            Point2::new(p.x + offset.x, p.y + offset.y)
        })
        .collect()
}

fn fmt_coord(v: f64) -> String {
    let v = if v.abs() < 5e-7 { 0.0 } else { v };
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn path_data(pts: &[Point2], close: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            d.push(' ');
        }
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{},{}", fmt_coord(p.x), fmt_coord(p.y));
    }
    if close {
        d.push_str(" Z");
    }
    d
}

/// SVG 1.1 document with the cut outline and the dashed seam, 1 user unit = 1 mm.
pub fn pattern_svg(spec: &PatternSpec) -> Result<String> {
    let outline = rim_polyline(spec, EXPORT_SAMPLES_PER_WAVE)?;
    let seam = seam_polyline(spec, EXPORT_SAMPLES_PER_WAVE)?;

    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &outline {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let (w, h) = (x1 - x0, y1 - y0);

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}mm\" height=\"{}mm\" viewBox=\"{} {} {} {}\">",
        fmt_coord(w),
        fmt_coord(h),
        fmt_coord(x0),
        fmt_coord(y0),
        fmt_coord(w),
        fmt_coord(h)
    );
    let _ = writeln!(
        svg,
        "  <path id=\"outline\" d=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.2\"/>",
        path_data(&outline[..outline.len() - 1], true)
    );
    let _ = writeln!(
        svg,
        "  <path id=\"seam\" d=\"{}\" fill=\"none\" stroke=\"#d00000\" stroke-width=\"0.2\" stroke-dasharray=\"1.5,1\"/>",
        path_data(&seam, false)
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes [`pattern_svg`] to `path` via a temporary file and rename.
pub fn export_pattern(spec: &PatternSpec, path: &Path) -> Result<()> {
    let svg = pattern_svg(spec)?;
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("path has no file name")))?;
    let tmp = dir.join(format!(".{}.tmp", file_name.to_string_lossy()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(svg.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}
