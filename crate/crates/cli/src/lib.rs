//! Experiment runner for the NOMA cooperative relaying rate library:
//! scenario files, sweeps, CSV output and the validation checks.

pub mod config;
pub mod sweep;
pub mod validate;

pub use config::{ConfigError, ScenarioConfig};
pub use sweep::{evaluate, run_sweep, write_csv, Axis, PointError, SpecError, SweepRow, SweepSpec, CSV_HEADER};
pub use validate::{run_checks, CheckResult};
