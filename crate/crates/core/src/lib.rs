//! Quasi-static models for balloon-in-sleeve soft bending actuators.
//!
//! A flat polyethylene sleeve with a sinusoidal rim holds an ordinary latex
//! balloon. Above an onset pressure the balloon buckles into each wave of the
//! rim; every wave then behaves like a pouch motor whose chord shortens, and
//! the accumulated shortening on one side bends the actuator.
//!
//! The crate is organised bottom-up:
//!
//! * [`pattern`]: skin geometry, fabrication outline (SVG), mass and cost.
//! * [`pouch`]: closed-form circular-arc mechanics of a single wave.
//! * [`equilibrium`]: per-wave bulge angle that balances pressure work against
//!   balloon resistance.
//! * [`kinematics`]: constant-curvature backbone from total contraction.
//! * [`statics`]: potential energy, tip push force, base stiffness.
//! * [`calibration`]: Nelder–Mead fit of the free model parameters.
//! * [`gripper`]: three-finger friction grasp and payload estimate.
//! * [`design`]: exhaustive wavelength/amplitude grid search.
//! * [`config`]: JSON configuration with a single table of defaults.
//!
//! Units throughout: millimetres, kilopascals, newtons, grams, millijoules,
//! radians (degrees only where a field name says so).

pub mod calibration;
pub mod config;
pub mod design;
pub mod equilibrium;
pub mod error;
pub mod gripper;
pub mod kinematics;
pub mod pattern;
pub mod pouch;
pub mod roots;
pub mod simplex;
pub mod statics;
pub mod units;

pub use calibration::{CalibrationDataset, FittedParameters, ModelParameters};
pub use config::Config;
pub use design::{DesignQuery, Objective, SweepTable};
pub use equilibrium::{Actuator, ActuatorState, BalloonModel};
pub use error::{Error, Result};
pub use gripper::{GraspResult, GraspScenario};
pub use kinematics::{BackbonePose, Point2};
pub use pattern::{MaterialModel, PatternSpec};
pub use pouch::PouchSegment;
pub use statics::TipLoadResult;
