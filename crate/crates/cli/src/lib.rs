//! Command-line front end for the entry-deterrence solver.

pub mod commands;
pub mod config;
pub mod format;

use std::io::Write;

use clap::{Parser, Subcommand};
use deterrence_core::ModelError;
use thiserror::Error;

pub use config::{Flags, Format, RangeSpec, RunConfig};
pub use format::{sig9, SolveRecord, SWEEP_HEADER};

#[derive(Debug, Parser)]
#[command(
    name = "deterrence",
    version,
    about = "Entry deterrence with resistance externalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one market at one entry cost.
    Solve(Flags),
    /// Solve over an entry-cost grid, optionally crossed with phi or theta.
    Sweep(Flags),
    /// Profit curves and markers for plotting.
    Figure(Flags),
    /// Compare closed forms against brute-force grids.
    Check(Flags),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("oracle check failed: {0}")]
    OracleFailure(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Model(_) => 2,
            CliError::OracleFailure(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(f) => commands::solve(&RunConfig::resolve(f)?, stdout),
        Command::Sweep(f) => commands::sweep(&RunConfig::resolve(f)?, stdout),
        Command::Figure(f) => commands::figure(&RunConfig::resolve(f)?, stdout),
        Command::Check(f) => commands::check(&RunConfig::resolve(f)?, stdout),
    }
}
