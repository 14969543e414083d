//! `chebmass`: evaluation, conversion, integration, orthogonality checks and
//! least-squares fits from the command line.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 usage, 3 check failure,
//! 4 degenerate fit.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

pub const MAX_DEGREE: usize = 64;

pub const EXIT_NUMERIC: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CHECK: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<chebmass::Error> for CliError {
    fn from(e: chebmass::Error) -> Self {
        use chebmass::Error as E;
        let code = match e {
            E::DegenerateNorm { .. } => EXIT_DEGENERATE,
            E::BelowMinimum { .. }
            | E::IndexOutOfRange { .. }
            | E::DegreeDecrease { .. }
            | E::NegativeMass { .. }
            | E::Parse(_)
            | E::FlavorMismatch { .. } => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
