//! Command-line front end: scenario files, report writers and the
//! reproduction suites behind the `qhm` binary.

mod commands;
pub mod config;
pub mod output;
pub mod repro;

pub use commands::{run, Cli, Command, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
