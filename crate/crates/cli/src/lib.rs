//! Command-line front end: expression parser, input files and reports.

pub mod commands;
pub mod expr;
pub mod input;
pub mod report;

use thiserror::Error;

pub use commands::{run, Cli, Command};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] input::InputError),
    #[error("--{flag}: {source}")]
    Flag { flag: &'static str, source: expr::ExprError },
    #[error("{0}")]
    Usage(String),
    /// The library rejected the input.
    #[error("{0}")]
    Library(String),
    /// A result failed its own consistency check.
    #[error("internal error: {0}")]
    Contract(String),
}

impl CliError {
    /// 1 for bad input, 2 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Contract(_) => 2,
            _ => 1,
        }
    }
}
