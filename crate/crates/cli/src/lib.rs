//! Library side of the `qchan` command: argument parsing helpers and the
//! subcommand implementations, kept separate from `main` so they can be
//! exercised without spawning the binary.

pub mod channel_input;
pub mod commands;
pub mod error;

pub use error::CliError;
