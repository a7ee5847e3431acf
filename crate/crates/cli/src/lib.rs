//! Experiment runner for `wcop`: JSON configs in, deterministic JSON reports
//! and CSV point clouds out.

pub mod commands;
pub mod config;
pub mod report;
pub mod sample;
pub mod verify;

pub use config::ExperimentConfig;
pub use report::{Record, Report};

/// Failures that end a run before a report is produced.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// 1 config or output, 2 domain or numerical, 3 precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Domain(_) | CliError::Numerical(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<wcop::Error> for CliError {
    fn from(e: wcop::Error) -> Self {
        match e {
            wcop::Error::Domain(m) => CliError::Domain(m),
            wcop::Error::Precondition(m) => CliError::Precondition(m),
            wcop::Error::Numerical(m) => CliError::Numerical(m),
            wcop::Error::Internal(m) => CliError::Numerical(format!("internal: {m}")),
        }
    }
}

/// Exit code for a report whose checks did not all pass.
pub const EXIT_TOLERANCE: i32 = 4;
