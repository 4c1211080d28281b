use std::process::ExitCode;

use clap::Parser;
use layered_regen::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let result = run(Cli::parse());
    if let Err(err) = &result {
        eprintln!("error: {err}");
    }
    ExitCode::from(exit_code(&result))
}
