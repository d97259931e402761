use std::process::ExitCode;

use clap::Parser;
use zerosum_cli::Cli;

fn main() -> ExitCode {
    zerosum_cli::run(Cli::parse())
}
