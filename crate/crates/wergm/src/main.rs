//! `wergm`: command-line access to the free energy, critical point, phase
//! curve, sampler and Gaussian-model computations. Results go to stdout (or
//! `--output`) as CSV or JSON; failures print one JSON error record on stderr
//! and exit nonzero.

mod cli;
mod commands;
mod error;
mod format;
mod range;
mod table;

use std::process::ExitCode;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::Parser;

use crate::cli::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", parse_error(&e).to_json());
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}

fn parse_error(e: &clap::Error) -> CliError {
    // "--beta1 <BETA1>" -> "beta1"
    let parameter = match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => s.split_whitespace().next().map(|a| a.trim_start_matches('-').replace('-', "_")),
        Some(ContextValue::Strings(v)) => v.first().map(|a| {
            a.split_whitespace().next().unwrap_or(a).trim_start_matches('-').replace('-', "_")
        }),
        _ if matches!(e.kind(), ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand) => Some("command".into()),
        _ => None,
    };
    // the error text up to the usage block, on one line
    let rendered = e.render().to_string();
    let message = rendered
        .lines()
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    let message = message.trim_start_matches("error: ");
    CliError { parameter, ..CliError::cli("parse_arguments", message, None) }
}
