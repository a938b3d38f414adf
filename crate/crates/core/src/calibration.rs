//! Least-squares calibration of the global model parameters.
//!
//! A dataset is a list of target rows. Each row predicts one scalar from the
//! model and compares it with a measured value, normalized by a scale typical
//! of its kind. The residual is the weighted RMS of those normalized errors.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{Actuator, BalloonModel};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::pattern::PatternSpec;
use crate::simplex::{self, Options};
use crate::statics::tip_push_force;

/// Angle errors are divided by this many degrees.
pub const ANGLE_SCALE_DEG: f64 = 35.0;
/// Force errors are divided by this many newtons.
pub const FORCE_SCALE_N: f64 = 0.07;
/// Onset and saturation-ordering errors are divided by this many kPa.
pub const PRESSURE_SCALE_KPA: f64 = 20.0;

pub const CSV_HEADER: [&str; 6] = [
    "kind",
    "wavelength_mm",
    "pressure_kpa",
    "push_mm",
    "value",
    "weight",
];

/// Targets built from the few scalars the characterization reports.
pub const ANCHOR_CSV: &str = include_str!("../fixtures/anchor.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// Bend angle in degrees, averaged over the listed wavelengths.
    Angle,
    /// Tip reaction in newtons for a push, averaged over the wavelengths.
    Force,
    /// Direct target on the onset pressure (kPa).
    Onset,
    /// Soft constraint: saturation pressure strictly falls along the listed
    /// wavelengths. The value column is unused.
    SaturationOrder,
}

impl SampleKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "angle" => SampleKind::Angle,
            "force" => SampleKind::Force,
            "onset" => SampleKind::Onset,
            "saturation_order" => SampleKind::SaturationOrder,
            _ => return None,
        })
    }

    fn as_str(self) -> &'static str {
        match self {
            SampleKind::Angle => "angle",
            SampleKind::Force => "force",
            SampleKind::Onset => "onset",
            SampleKind::SaturationOrder => "saturation_order",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub kind: SampleKind,
    pub wavelengths: Vec<f64>,
    pub pressure: f64,
    pub push: f64,
    pub value: f64,
    pub weight: f64,
}

impl Sample {
    pub fn angle(wavelength: f64, pressure: f64, degrees: f64) -> Self {
        Sample {
            kind: SampleKind::Angle,
            wavelengths: vec![wavelength],
            pressure,
            push: 0.0,
            value: degrees,
            weight: 1.0,
        }
    }

    pub fn force(wavelength: f64, pressure: f64, push: f64, newtons: f64) -> Self {
        Sample {
            kind: SampleKind::Force,
            wavelengths: vec![wavelength],
            pressure,
            push,
            value: newtons,
            weight: 1.0,
        }
    }

    fn validate(&self, line: usize) -> Result<()> {
        let bad = |reason: String| Error::Parse { line, reason };
        let needs_design = !matches!(self.kind, SampleKind::Onset);
        if needs_design && self.wavelengths.is_empty() {
            return Err(bad("wavelength_mm is required".into()));
        }
        if self.kind == SampleKind::SaturationOrder && self.wavelengths.len() < 2 {
            return Err(bad("saturation_order needs at least two wavelengths".into()));
        }
        for (field, v) in [
            ("pressure_kpa", self.pressure),
            ("push_mm", self.push),
            ("value", self.value),
        ] {
            require_non_negative(field, v).map_err(|e| bad(e.to_string()))?;
        }
        for &b in &self.wavelengths {
            require_positive("wavelength_mm", b).map_err(|e| bad(e.to_string()))?;
        }
        require_positive("weight", self.weight).map_err(|e| bad(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationDataset {
    pub samples: Vec<Sample>,
}

fn parse_number(field: &str, text: &str, line: usize) -> Result<f64> {
    text.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        reason: format!("{field}: cannot parse '{text}' as a number"),
    })
}

fn parse_optional(field: &str, text: &str, line: usize) -> Result<Option<f64>> {
    if text.trim().is_empty() {
        Ok(None)
    } else {
        parse_number(field, text, line).map(Some)
    }
}

impl CalibrationDataset {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::validation("dataset", "contains no samples"));
        }
        for (i, s) in samples.iter().enumerate() {
            s.validate(i + 1)?;
        }
        Ok(CalibrationDataset { samples })
    }

    pub fn anchor() -> Self {
        Self::from_csv_str(ANCHOR_CSV).expect("shipped anchor fixture is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        let header = match records.next() {
            None => {
                return Err(Error::Parse {
                    line: 1,
                    reason: "empty file, expected a header row".into(),
                })
            }
            Some(r) => r.map_err(|e| csv_error(e, 1))?,
        };
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Parse {
                line: 1,
                reason: format!("header must be {}", CSV_HEADER.join(",")),
            });
        }

        let mut samples = Vec::new();
        for record in records {
            let record = record.map_err(|e| csv_error(e, 0))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.iter().all(str::is_empty) {
                continue;
            }
            if record.len() != CSV_HEADER.len() {
                return Err(Error::Parse {
                    line,
                    reason: format!(
                        "expected {} columns, found {}",
                        CSV_HEADER.len(),
                        record.len()
                    ),
                });
            }
            let kind = SampleKind::parse(&record[0]).ok_or_else(|| Error::Parse {
                line,
                reason: format!("unknown kind '{}'", &record[0]),
            })?;
            let wavelengths = if record[1].is_empty() {
                Vec::new()
            } else {
                record[1]
                    .split('|')
                    .map(|t| parse_number("wavelength_mm", t, line))
                    .collect::<Result<Vec<_>>>()?
            };
            let pressure = parse_optional("pressure_kpa", &record[2], line)?;
            let push = parse_optional("push_mm", &record[3], line)?;
            let value = parse_optional("value", &record[4], line)?;
            let weight = parse_optional("weight", &record[5], line)?.unwrap_or(1.0);
            let missing = |field: &str| Error::Parse {
                line,
                reason: format!("{field} is required for {} rows", kind.as_str()),
            };
            let (pressure, push, value) = match kind {
                SampleKind::Angle => (
                    pressure.ok_or_else(|| missing("pressure_kpa"))?,
                    0.0,
                    value.ok_or_else(|| missing("value"))?,
                ),
                SampleKind::Force => (
                    pressure.ok_or_else(|| missing("pressure_kpa"))?,
                    push.ok_or_else(|| missing("push_mm"))?,
                    value.ok_or_else(|| missing("value"))?,
                ),
                SampleKind::Onset => (0.0, 0.0, value.ok_or_else(|| missing("value"))?),
                SampleKind::SaturationOrder => (0.0, 0.0, 0.0),
            };
            let sample = Sample {
                kind,
                wavelengths,
                pressure,
                push,
                value,
                weight,
            };
            sample.validate(line)?;
            samples.push(sample);
        }
        if samples.is_empty() {
            return Err(Error::validation("dataset", "contains no samples"));
        }
        Ok(CalibrationDataset { samples })
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = CSV_HEADER.join(",");
        out.push('\n');
        for s in &self.samples {
            let bs: Vec<String> = s.wavelengths.iter().map(|b| b.to_string()).collect();
            let (p, push, v) = match s.kind {
                SampleKind::Angle => (s.pressure.to_string(), String::new(), s.value.to_string()),
                SampleKind::Force => (
                    s.pressure.to_string(),
                    s.push.to_string(),
                    s.value.to_string(),
                ),
                SampleKind::Onset => (String::new(), String::new(), s.value.to_string()),
                SampleKind::SaturationOrder => (String::new(), String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.kind.as_str(),
                bs.join("|"),
                p,
                push,
                v,
                s.weight
            ));
        }
        out
    }

    /// Distinct wavelengths referenced by any row, ascending.
    pub fn wavelengths(&self) -> Vec<f64> {
        let set: BTreeSet<u64> = self
            .samples
            .iter()
            .flat_map(|s| s.wavelengths.iter().map(|b| b.to_bits()))
            .collect();
        let mut v: Vec<f64> = set.into_iter().map(f64::from_bits).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Rows that carry a measured value (ordering constraints excluded).
    pub fn target_count(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| s.kind != SampleKind::SaturationOrder)
            .count()
    }
}

fn csv_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    Error::Parse {
        line,
        reason: e.to_string(),
    }
}

/// The four free parameters of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub section_height: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub onset_pressure: f64,
}

/// Box bounds, in the field order of [`ModelParameters`].
pub const LOWER_BOUNDS: [f64; 4] = [5.0, 0.0, 0.0, 0.0];
pub const UPPER_BOUNDS: [f64; 4] = [60.0, 1e4, 1e6, 40.0];
const NAMES: [&str; 4] = ["section_height_H", "kappa0", "kappa1", "onset_pressure"];

impl Default for ModelParameters {
    fn default() -> Self {
        let b = BalloonModel::default();
        ModelParameters {
            section_height: crate::config::DEFAULT_SECTION_HEIGHT,
            kappa0: b.kappa0,
            kappa1: b.kappa1,
            onset_pressure: b.onset_pressure,
        }
    }
}

impl ModelParameters {
    pub fn from_balloon(balloon: &BalloonModel, section_height: f64) -> Self {
        ModelParameters {
            section_height,
            kappa0: balloon.kappa0,
            kappa1: balloon.kappa1,
            onset_pressure: balloon.onset_pressure,
        }
    }

    pub fn balloon(&self) -> BalloonModel {
        BalloonModel {
            onset_pressure: self.onset_pressure,
            kappa0: self.kappa0,
            kappa1: self.kappa1,
        }
    }

    fn to_array(self) -> [f64; 4] {
        [
            self.section_height,
            self.kappa0,
            self.kappa1,
            self.onset_pressure,
        ]
    }

    fn from_array(x: [f64; 4]) -> Self {
        ModelParameters {
            section_height: x[0],
            kappa0: x[1],
            kappa1: x[2],
            onset_pressure: x[3],
        }
    }

    pub fn check_bounds(&self) -> Result<()> {
        for (i, v) in self.to_array().into_iter().enumerate() {
            if !(v.is_finite() && LOWER_BOUNDS[i] <= v && v <= UPPER_BOUNDS[i]) {
                return Err(Error::validation(
                    NAMES[i],
                    format!(
                        "{v} is outside the calibration bounds [{}, {}]",
                        LOWER_BOUNDS[i], UPPER_BOUNDS[i]
                    ),
                ));
            }
        }
        Ok(())
    }

    fn normalized(&self) -> Vec<f64> {
        self.to_array()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - LOWER_BOUNDS[i]) / (UPPER_BOUNDS[i] - LOWER_BOUNDS[i]))
            .collect()
    }

    fn from_normalized(u: &[f64]) -> Self {
        let mut x = [0.0; 4];
        for i in 0..4 {
            x[i] = LOWER_BOUNDS[i] + u[i] * (UPPER_BOUNDS[i] - LOWER_BOUNDS[i]);
        }
        Self::from_array(x)
    }

    pub fn actuator(&self, template: &PatternSpec, wavelength: f64) -> Result<Actuator> {
        Actuator::new(
            (*template).with_wavelength(wavelength),
            self.balloon(),
            self.section_height,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FittedParameters {
    #[serde(flatten)]
    pub parameters: ModelParameters,
    pub residual_rms: f64,
    /// Objective evaluations spent.
    pub iterations: usize,
    pub converged: bool,
    /// Fewer measured targets than free parameters. The fit still runs but
    /// the answer depends on the starting point.
    pub underdetermined: bool,
}

fn mean_over<F>(template: &PatternSpec, bs: &[f64], params: &ModelParameters, f: F) -> Result<f64>
where
    F: Fn(&Actuator) -> Result<f64>,
{
    let mut sum = 0.0;
    for &b in bs {
        sum += f(&params.actuator(template, b)?)?;
    }
    Ok(sum / bs.len() as f64)
}

/// Normalized error of one row.
fn sample_error(template: &PatternSpec, params: &ModelParameters, s: &Sample) -> Result<f64> {
    Ok(match s.kind {
        SampleKind::Angle => {
            let deg = mean_over(template, &s.wavelengths, params, |a| {
                Ok(a.state(s.pressure)?.bend_angle.to_degrees())
            })?;
            (deg - s.value) / ANGLE_SCALE_DEG
        }
        SampleKind::Force => {
            let f = mean_over(template, &s.wavelengths, params, |a| {
                Ok(tip_push_force(a, s.pressure, s.push)?.reaction_force)
            })?;
            (f - s.value) / FORCE_SCALE_N
        }
        SampleKind::Onset => (params.onset_pressure - s.value) / PRESSURE_SCALE_KPA,
        SampleKind::SaturationOrder => {
            let mut violation = 0.0;
            let sat: Vec<Option<f64>> = s
                .wavelengths
                .iter()
                .map(|&b| Ok(params.actuator(template, b)?.saturation_pressure()))
                .collect::<Result<_>>()?;
            for pair in sat.windows(2) {
                violation += match (pair[0], pair[1]) {
                    (Some(p0), Some(p1)) => (p1 - p0).max(0.0) / PRESSURE_SCALE_KPA,
                    (Some(_), None) => 1.0,
                    // An unsaturable design followed by anything cannot be ordered.
                    (None, _) => 1.0,
                };
            }
            violation
        }
    })
}

/// Weighted RMS of the normalized errors.
pub fn residual(
    params: &ModelParameters,
    dataset: &CalibrationDataset,
    template: &PatternSpec,
) -> Result<f64> {
    params.check_bounds()?;
    if dataset.samples.is_empty() {
        return Err(Error::validation("dataset", "contains no samples"));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for s in &dataset.samples {
        let e = sample_error(template, params, s)?;
        num += s.weight * e * e;
        den += s.weight;
    }
    Ok((num / den).sqrt())
}

/// Nelder–Mead fit starting from `initial` (module defaults when `None`).
pub fn fit(
    dataset: &CalibrationDataset,
    template: &PatternSpec,
    initial: Option<ModelParameters>,
) -> Result<FittedParameters> {
    fit_with(dataset, template, initial, &Options::default())
}

pub fn fit_with(
    dataset: &CalibrationDataset,
    template: &PatternSpec,
    initial: Option<ModelParameters>,
    options: &Options,
) -> Result<FittedParameters> {
    let start = initial.unwrap_or_default();
    // Surfaces bad templates, wavelengths, or starting points up front.
    let start_residual = residual(&start, dataset, template)?;

    let objective = |u: &[f64]| {
        residual(&ModelParameters::from_normalized(u), dataset, template).unwrap_or(f64::INFINITY)
    };
    let outcome = simplex::minimize(objective, &start.normalized(), options);
    let mut best = ModelParameters::from_normalized(&outcome.x);
    let mut best_residual = residual(&best, dataset, template)?;
    if best_residual > start_residual {
        best = start;
        best_residual = start_residual;
    }
    Ok(FittedParameters {
        parameters: best,
        residual_rms: best_residual,
        iterations: outcome.evaluations,
        converged: outcome.converged,
        underdetermined: dataset.target_count() < 4,
    })
}
