//! Command-line front end for `zerosum-core`: argument types, dispatch, the
//! result cache and the verification drivers.

pub mod args;
pub mod cache;
pub mod commands;
pub mod verify;

use std::process::ExitCode;

use serde::Serialize;
use zerosum_core::Error;

pub use args::Cli;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// What a command produced: a JSON document, its plain-text rendering,
/// and the exit code.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
    pub code: u8,
}

impl Output {
    pub fn new(value: &impl Serialize, text: String, code: u8) -> anyhow::Result<Output> {
        Ok(Output { json: serde_json::to_value(value)?, text, code })
    }
}

/// Exit code for an error that aborted a command.
pub fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExhausted { .. }) => EXIT_BUDGET,
        Some(Error::InvariantBreach(_)) => EXIT_VIOLATION,
        Some(_) => EXIT_USAGE,
        None => EXIT_VIOLATION,
    }
}

pub fn run(cli: Cli) -> ExitCode {
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.global.workers()).build_global() {
        eprintln!("warning: {e}");
    }
    let json = cli.global.json;
    match commands::dispatch(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
