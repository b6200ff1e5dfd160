//! Batch front-end: builds the group, runs one pipeline, writes CSV reports
//! with a `# key: value` header and maps the outcome to an exit code.

mod commands;
mod config;
mod output;
mod verify;

pub use config::{Cli, Command, RunConfig};
pub use output::TIMESTAMP_KEY;

use clap::Parser;
use hypaffine::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Errors that abort a command before a verdict is reached.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                Error::CapExceeded { .. }
                | Error::IndexRadius { .. }
                | Error::OutOfBall { .. }
                | Error::DistanceOutOfRange { .. }
                | Error::EigenFailure(_),
            ) => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match commands::dispatch(cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs them. Usage errors
/// print clap's message and return [`EXIT_INPUT`].
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            code
        }
    }
}
