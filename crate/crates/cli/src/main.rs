//! `edgescatter`: evaluate, check and compare the edge-scattering fields.
//!
//! Exit status is 0 when every check passes, 1 on a numerical failure and 2
//! on a usage error.

mod commands;
mod config;
mod summary;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;

use commands::Outcome;
use config::{Command, USAGE};
use edgescatter::Error;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.first().is_some_and(|a| a == "--help" || a == "-h") {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let config = match config::from_args(args, |p| std::fs::read_to_string(p)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}\n\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match config.command {
        Command::Field => commands::field(&config, &mut out),
        Command::Residual => commands::residual(&config, &mut out),
        Command::Oracle => commands::oracle(&config, &mut out),
        Command::Tail => commands::tail(&config, &mut out),
        Command::Verify => match verify::run_suite(&config, &mut out) {
            Ok(0) => Ok(Outcome::Pass),
            Ok(n) => Ok(Outcome::Fail(format!("{n} invariant(s) failed"))),
            Err(e) => Err(e.into()),
        },
    };
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e @ (Error::InvalidParameter(_) | Error::Misaligned { .. } | Error::Resolution(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(1)
        }
    }
}
