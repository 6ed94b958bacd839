//! File formats, reports and the `desws` command-line front end.
//!
//! The numeric work lives in `desws-core`; this crate reads and writes the
//! documented formats (see `FORMATS.md`) and composes the stages into the
//! subcommands of the binary.

pub mod commands;
pub mod ingestion;
mod number;

pub use number::fmt_g;

/// Report rendering for every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Command failure, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input, configuration or flags (exit 1).
    #[error("{0:#}")]
    Input(anyhow::Error),
    /// A violated internal invariant (exit 2).
    #[error("internal error: {0:#}")]
    Internal(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

pub(crate) fn input<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Input(e.into())
}

pub(crate) fn internal<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Internal(e.into())
}
