//! Command-line front end for `donorspin-core`.
//!
//! The binary is a thin wrapper over [`run`]; every subcommand produces a
//! [`output::CommandOutput`] that is either printed or written to a directory.

pub mod cli;
pub mod commands;
pub mod config;
pub mod data;
mod error;
pub mod format;
pub mod output;
pub mod report;

pub use cli::{run, Cli};
pub use error::{CliError, ExitCode};
