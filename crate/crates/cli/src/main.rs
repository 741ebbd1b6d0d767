//! `coherent`: reports for circle and sphere coherent states, rotator
//! distributions and the invariant suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 flag error,
//! 3 constraint violation.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut w = match output::sink(cli.run.out.as_deref()) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Circle(a) => commands::circle(&cli.run, a, &mut *w),
        Command::Sphere(a) => commands::sphere(&cli.run, a, &mut *w),
        Command::Rotator(a) => commands::rotator(&cli.run, a, &mut *w),
        Command::Verify => commands::verify(&cli.run, &mut *w),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Constraint(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
