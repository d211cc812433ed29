//! `modcurves`: batch driver. Certificates go to `--out` (stdout by
//! default); human summaries go to stderr. `arith` and `class` print their
//! answer on stdout and write a certificate only with `--out`.
//!
//! Exit codes: 0 success, 1 certification failure, 2 usage error.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

pub enum Failure {
    Usage(String),
    Certification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Certification(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Certification(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("modcurves: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
