//! Experiment orchestration for `podsim-core`: JSON configs, bundled
//! presets, a parallel batch runner, file formats and the commands behind
//! the `podsim` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod presets;
pub mod runner;
pub mod stats;

pub use error::{CliError, Result};
