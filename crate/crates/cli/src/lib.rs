//! Command-line front end for `qpl-core`.

pub mod args;
pub mod commands;
pub mod report;

use std::fmt;
use std::fs;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

pub use args::{Cli, Command, Format};
use commands::Output;

/// Machine-readable failure; printed as `{"error": {"kind", "message"}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        Self { kind: kind.to_owned(), message: message.into(), exit_code: 1 }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self { exit_code: 2, ..Self::new("usage", message) }
    }

    fn csv(e: csv::Error) -> Self {
        Self::new("io", e.to_string())
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind, "message": self.message } }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<qpl_core::Error> for CliError {
    fn from(e: qpl_core::Error) -> Self {
        Self::new(e.kind(), e.to_string())
    }
}

/// Renders the command's output without writing it anywhere.
pub fn render(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let opts = cli.command.output();
    match commands::execute(&cli.command)? {
        Output::Raw(bytes) => Ok(bytes),
        Output::Report(mut r) => {
            if opts.stamp {
                r.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
            }
            r.render(opts.format)
        }
    }
}

/// Runs the command and writes to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let bytes = render(cli)?;
    match &cli.command.output().out {
        Some(path) => fs::write(path, &bytes).map_err(|e| CliError::new("io", format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| CliError::new("io", e.to_string()))
        }
    }
}
