//! Subcommands of the `bpa` tool. `main` only parses arguments and maps
//! [`CliError`] to an exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use bpa_core::calibration::{fit, CalibrationDataset};
use bpa_core::design::{sweep, DesignQuery, Objective};
use bpa_core::gripper::{max_payload, payload_ratio, GraspScenario};
use bpa_core::pattern::{bill_of_materials, export_pattern};
use bpa_core::statics::{tip_push_force, STANDARD_PUSH};
use bpa_core::{Config, Error};
use clap::{Parser, Subcommand};
use serde::Serialize;

pub mod format;

use format::sig6;

pub const SIMULATE_HEADER: &str = "pressure_kpa,theta_rad,fill_fraction,bend_deg,tip_force_n";
pub const OPTIMIZE_HEADER: [&str; 5] = ["wavelength_mm", "amplitude_mm", "value", "best", "error"];

#[derive(Debug, Parser)]
#[command(
    name = "bpa",
    version,
    about = "Balloon-in-sleeve bending actuator models"
)]
pub struct Cli {
    /// JSON configuration; every key is optional.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Overrides `design.wavelength_b` (mm).
    #[arg(long, global = true, value_name = "MM")]
    pub wavelength: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure sweep of the configured design as CSV.
    Simulate {
        /// Comma-separated pressures in kPa. An empty list prints the header only.
        #[arg(long, value_name = "LIST", default_value = "10,20,30,40,50")]
        pressures: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Fabrication outline as SVG.
    Pattern {
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Fit H and the balloon constants to a target CSV.
    Calibrate {
        /// Calibration CSV.
        dataset: PathBuf,
        /// Where to write the fitted configuration. Without it the
        /// configuration goes to stdout and the report to stderr.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Gripper contact, squeeze forces and payload as JSON.
    Grasp {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Grid search over wavelength (and optionally amplitude) as CSV.
    Optimize {
        #[arg(long, value_name = "NAME", default_value = "max_tip_force")]
        objective: String,
        /// Comma-separated wavelengths in mm.
        #[arg(long, value_name = "LIST", default_value = "25,30,35,40")]
        grid: String,
        /// Comma-separated amplitudes in mm; defaults to the configured one.
        #[arg(long, value_name = "LIST")]
        amplitudes: Option<String>,
        /// Evaluation pressure in kPa.
        #[arg(long, value_name = "KPA", default_value_t = 50.0)]
        pressure: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Bill of materials as JSON.
    Bom {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, arguments or input files. Exit code 2.
    Input(String),
    /// Anything else. Exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

/// Errors while reading what the user pointed us at are input errors even
/// when the cause is I/O.
fn input(e: Error) -> CliError {
    CliError::Input(e.to_string())
}

fn internal(e: Error) -> CliError {
    if e.is_input_error() {
        CliError::Input(e.to_string())
    } else {
        CliError::Internal(e.to_string())
    }
}

fn parse_list(field: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| {
                CliError::Input(format!("invalid {field}: cannot parse '{t}' as a number"))
            })
        })
        .collect()
}

pub fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => Config::from_path(p).map_err(input)?,
        None => Config::default(),
    };
    if let Some(b) = cli.wavelength {
        cfg.design.wavelength_b = b;
    }
    cfg.validate().map_err(input)?;
    Ok(cfg)
}

/// Output of one subcommand: bytes for stdout or a file, plus an optional
/// note for stderr.
pub struct Output {
    pub body: Vec<u8>,
    pub target: Option<PathBuf>,
    pub note: Option<String>,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub fn simulate(cfg: &Config, pressures: &str) -> Result<String, CliError> {
    let pressures = parse_list("pressures", pressures)?;
    let act = cfg.actuator().map_err(input)?;
    let mut out = String::from(SIMULATE_HEADER);
    out.push('\n');
    for p in pressures {
        let state = act.state(p).map_err(input)?;
        let force = tip_push_force(&act, p, STANDARD_PUSH).map_err(internal)?;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig6(p),
            sig6(state.theta),
            sig6(state.fill_fraction),
            sig6(state.bend_angle.to_degrees()),
            sig6(force.reaction_force)
        ));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    #[serde(rename = "section_height_H")]
    pub section_height: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub onset_pressure: f64,
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    pub underdetermined: bool,
}

pub fn calibrate(cfg: &Config, dataset: &Path) -> Result<(Config, FitReport), CliError> {
    let data = CalibrationDataset::from_path(dataset).map_err(input)?;
    let fitted = fit(&data, &cfg.design, Some(cfg.parameters())).map_err(input)?;
    let p = fitted.parameters;
    let report = FitReport {
        section_height: p.section_height,
        kappa0: p.kappa0,
        kappa1: p.kappa1,
        onset_pressure: p.onset_pressure,
        residual_rms: fitted.residual_rms,
        iterations: fitted.iterations,
        converged: fitted.converged,
        underdetermined: fitted.underdetermined,
    };
    Ok((cfg.clone().with_parameters(&p), report))
}

#[derive(Debug, Serialize)]
pub struct GraspReport {
    pub contacts: Vec<Option<f64>>,
    pub normal_forces_n: Vec<f64>,
    pub max_payload_g: f64,
    pub payload_ratio: f64,
    pub liftable: bool,
}

pub fn grasp(cfg: &Config) -> Result<GraspReport, CliError> {
    let scenario = cfg
        .grasp_scenario()
        .ok_or_else(|| CliError::Input("invalid grasp: the config has no grasp section".into()))?;
    let act = cfg.actuator_for(scenario.finger_spec).map_err(input)?;
    let result = max_payload(&scenario, &act).map_err(internal)?;
    Ok(GraspReport {
        contacts: result.contact_arclength,
        normal_forces_n: result.normal_force,
        max_payload_g: result.max_payload,
        payload_ratio: payload_ratio(&scenario, result.max_payload, &cfg.material)
            .map_err(internal)?,
        liftable: result.liftable,
    })
}

pub fn optimize(
    cfg: &Config,
    objective: &str,
    grid: &str,
    amplitudes: Option<&str>,
    pressure: f64,
) -> Result<String, CliError> {
    let objective: Objective = objective.parse().map_err(input)?;
    let query = DesignQuery {
        objective,
        pressure,
        wavelength_grid: parse_list("grid", grid)?,
        amplitude_grid: amplitudes
            .map(|a| parse_list("amplitudes", a))
            .transpose()?,
        template: cfg.design,
        balloon: cfg.balloon,
        section_height: cfg.section_height,
        material: cfg.material,
        grasp: cfg.grasp_scenario().unwrap_or_else(|| GraspScenario {
            finger_spec: cfg.design,
            ..GraspScenario::default()
        }),
    };
    let table = sweep(&query).map_err(input)?;
    let mut w = csv_writer();
    let fail = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(OPTIMIZE_HEADER).map_err(fail)?;
    for (i, row) in table.rows.iter().enumerate() {
        w.write_record([
            sig6(row.wavelength),
            sig6(row.amplitude),
            row.value.map(sig6).unwrap_or_default(),
            (table.best == Some(i)).to_string(),
            row.error.clone().unwrap_or_default(),
        ])
        .map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

/// Runs the parsed command and returns what to emit.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let plain = |body: Vec<u8>, target: &Option<PathBuf>| Output {
        body,
        target: target.clone(),
        note: None,
    };
    match &cli.command {
        Command::Simulate { pressures, out } => {
            Ok(plain(simulate(&cfg, pressures)?.into_bytes(), out))
        }
        Command::Pattern { out } => {
            export_pattern(&cfg.design, out).map_err(internal)?;
            Ok(Output {
                body: Vec::new(),
                target: None,
                note: None,
            })
        }
        Command::Calibrate { dataset, out } => {
            let (fitted, report) = calibrate(&cfg, dataset)?;
            let config_json = fitted.to_json_pretty().into_bytes();
            let report_json = String::from_utf8(json(&report)?).expect("JSON is UTF-8");
            Ok(match out {
                Some(path) => {
                    write_file(path, &config_json)?;
                    Output {
                        body: report_json.into_bytes(),
                        target: None,
                        note: None,
                    }
                }
                None => Output {
                    body: config_json,
                    target: None,
                    note: Some(report_json),
                },
            })
        }
        Command::Grasp { out } => Ok(plain(json(&grasp(&cfg)?)?, out)),
        Command::Optimize {
            objective,
            grid,
            amplitudes,
            pressure,
            out,
        } => Ok(plain(
            optimize(&cfg, objective, grid, amplitudes.as_deref(), *pressure)?.into_bytes(),
            out,
        )),
        Command::Bom { out } => {
            let bom = bill_of_materials(&cfg.design, &cfg.material).map_err(input)?;
            Ok(plain(json(&bom)?, out))
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

/// Executes and emits. Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|out| {
        if let Some(note) = &out.note {
            eprint!("{note}");
        }
        match &out.target {
            Some(path) => write_file(path, &out.body),
            None => std::io::stdout()
                .lock()
                .write_all(&out.body)
                .map_err(|e| CliError::Internal(e.to_string())),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
