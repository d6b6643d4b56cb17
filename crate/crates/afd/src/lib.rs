//! File formats, run configuration and command dispatch for the `afd`
//! command-line tool. The numerics live in `afd-core`.

pub mod config;
pub mod error;
pub mod export;
pub mod input;
pub mod record;
pub mod run;

pub use config::{Algorithm, InitMode, RunConfig, Space};
pub use error::{exit, CliError};
pub use record::{ComplexValue, ComponentRecord, Kind, ResultRecord, Timings, SCHEMA};
