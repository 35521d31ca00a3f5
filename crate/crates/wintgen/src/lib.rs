//! File formats, run configuration, reports and command implementations for
//! the `wintgen` command-line tool. The mathematics lives in `wintgen-core`.

pub mod commands;
pub mod config;
pub mod model_file;
pub mod report;

use std::fmt;

/// Errors that map to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "input error: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Worker count from `--jobs`, else `WINTGEN_JOBS`, else rayon's default.
pub fn resolve_jobs(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("WINTGEN_JOBS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Input(format!("WINTGEN_JOBS must be a positive integer, got `{v}`"))),
        _ => Ok(None),
    }
}
