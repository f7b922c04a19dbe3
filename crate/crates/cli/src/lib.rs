//! Library half of the `perron-forge` binary: argument types, JSON artifacts
//! and the subcommands.

pub mod args;
pub mod artifacts;
pub mod commands;
pub mod exit;

use args::{Cli, Command};
use exit::CliError;

/// Runs a parsed command and returns the text for stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Construct(a) => commands::construct_cmd(a),
        Command::Bound(a) => commands::bound(a),
        Command::Search(a) => commands::search(a),
        Command::Verify(a) => commands::verify(a),
    }
}
