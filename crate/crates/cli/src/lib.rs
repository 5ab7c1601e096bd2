//! Library half of the `superres` binary: config + manifest formats and
//! the command implementations, exposed so tests and fuzz targets can
//! drive them without spawning processes.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

pub use config::{BenchConfig, ConfigError};
pub use error::CliError;
