//! Command-line front end: argument grammar, command execution, CSV/JSON I/O and SVG plots.

pub mod args;
pub mod commands;
pub mod io;
pub mod plot;
pub mod report;
pub mod scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unknown names, malformed files, values outside the model's domain.
    #[error("{0}")]
    Validation(String),
    /// The computation itself failed, or an output could not be written.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// What a command produces: text for stdout and named files for the output directory.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(String, Vec<u8>)>,
}

pub use commands::execute;
