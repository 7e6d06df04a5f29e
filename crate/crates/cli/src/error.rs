//! Failure classes and their exit codes.

use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file, function spec or output path.
    #[error("config error: {0}")]
    Config(String),
    /// A numerical routine refused its input.
    #[error("error [{}]: {0}", .0.code())]
    Numerical(#[from] fracalc_core::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_PRECONDITION,
        }
    }
}
