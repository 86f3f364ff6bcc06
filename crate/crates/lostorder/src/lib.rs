//! Command-line front end for `lostorder-core`: tables, sweeps, protocol
//! runs and a verification suite, written as CSV or line-delimited JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use config::{Cli, RunConfig};
pub use error::CliError;
