//! Scenario files, presets and the `solve`/`sweep`/`compare`/`beats` runners
//! behind the `cavity-entangler` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod scenario;

pub use error::{CliError, CliResult};
pub use scenario::{find_preset, parse_values, presets, Axis, Preset, Scenario, Solver};
