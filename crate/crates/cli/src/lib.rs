//! Command-line front end: config resolution, subcommands, CSV and
//! manifest output.

pub mod app;
pub mod commands;
pub mod config;
pub mod output;

use thiserror::Error;

pub use config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Compute(#[from] ergeom::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
