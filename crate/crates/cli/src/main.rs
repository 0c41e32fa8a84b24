//! `hecke`: command-line front end for the `hecke-core` kernels.
//!
//! Results go to standard output as JSON (or text with `--format text`).
//! A one-line run manifest goes to standard error on every invocation.

mod args;
mod commands;
mod error;
mod render;
mod settings;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Format};
use error::{CliError, EXIT_USAGE};
use settings::Settings;

fn manifest(argv: &[String], settings: Option<&Settings>, exit_code: i32, started: Instant) -> Value {
    json!({
        "manifest": {
            "command_line": argv,
            "config": settings.map(|s| serde_json::to_value(s).expect("settings serialize")),
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "exit_code": exit_code,
            "wall_time_ms": started.elapsed().as_millis() as u64,
        }
    })
}

fn main() -> ExitCode {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            eprintln!("{}", manifest(&argv, None, code, started));
            return ExitCode::from(code as u8);
        }
    };
    let settings = match Settings::resolve(&cli.global) {
        Ok(s) => s,
        Err(e) => return fail(&argv, None, &e, started),
    };
    match commands::run(&cli.command, &settings) {
        Ok(outcome) => {
            match settings.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.value).expect("values serialize")
                ),
                Format::Text => print!("{}", render::text(&outcome.value)),
            }
            eprintln!("{}", manifest(&argv, Some(&settings), outcome.exit_code, started));
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => fail(&argv, Some(&settings), &e, started),
    }
}

fn fail(argv: &[String], settings: Option<&Settings>, e: &CliError, started: Instant) -> ExitCode {
    let code = e.exit_code();
    eprintln!("{}", e.to_json());
    eprintln!("{}", manifest(argv, settings, code, started));
    ExitCode::from(code as u8)
}
