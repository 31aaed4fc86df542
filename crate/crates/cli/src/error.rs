//! Error type for the command line tool, mapping every failure to one
//! of the documented exit codes.

use thiserror::Error;

/// Failures surfaced by the command line tool. Everything here exits
/// with code 2 (usage or input error); verification failures are not
/// errors and exit with code 1 through the report path.
#[derive(Error, Debug)]
pub enum CliError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("duplicate algebra label {0}")]
    DuplicateLabel(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] infmot::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// The process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
