//! Command-line front end for `qvk`.

pub mod args;
pub mod commands;
pub mod error;
pub mod region;
pub mod scenario;

pub use args::Cli;
pub use error::{CliError, CliResult};

use args::Command;

/// Runs one command and returns what it prints on stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::VerifyState(a) => commands::verify_state(a),
        Command::Synthesize(a) => commands::synthesize(a),
        Command::Simulate(a) => scenario::simulate(&a.scenario),
        Command::Region(a) => region::region(a),
    }
}
