use std::fmt;
use std::process::ExitCode;

use qchan_core::Error as CoreError;

/// Failure categories mapped onto the stable exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unknown channel, missing or out-of-range parameters (exit 2).
    Usage(String),
    /// I/O and numerical failures (exit 3).
    Runtime(String),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(EXIT_USAGE),
            CliError::Runtime(_) => ExitCode::from(EXIT_RUNTIME),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnknownChannel(_)
            | CoreError::MissingParameter { .. }
            | CoreError::UnexpectedParameter { .. }
            | CoreError::InvalidParameter { .. }
            | CoreError::InvalidConfig(_)
            | CoreError::InvalidBlochVector(_)
            | CoreError::NonFinite => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
