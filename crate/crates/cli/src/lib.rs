//! Command-line driver: configuration, run orchestration and CSV export.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_ensemble, cmd_relax, cmd_run, cmd_sweep, cmd_validate_noise, parse_axis, Overrides,
    SweepAxis,
};
pub use config::{ModelSelector, SimConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Engine(#[from] noisemol::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 configuration, 3 numerical failure, 4 partial ensemble, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use noisemol::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(E::Domain { .. } | E::Usage(_)) => 2,
            CliError::Engine(E::Numerical { .. } | E::Convergence { .. }) => 3,
            CliError::Engine(E::PartialEnsemble { .. }) => 4,
            CliError::Engine(_) | CliError::Io { .. } => 1,
        }
    }
}
