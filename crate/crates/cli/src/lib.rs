//! Command line front end: argument parsing, dispatch and report rendering.

pub mod config;
pub mod report;
pub mod run;

pub use config::{Cli, Command, Format, RunConfig, UsageError};
pub use run::{run, Outcome};
