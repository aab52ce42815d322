use std::ffi::OsString;
use std::panic;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod render;

use commands::{Cli, Outcome};

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    match run(args) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(args: Vec<OsString>) -> anyhow::Result<Outcome> {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(Outcome::Success);
        }
        Err(e) => anyhow::bail!(
            "{}",
            e.render()
                .to_string()
                .trim_start_matches("error: ")
                .trim_end()
        ),
    };
    // Library invariants are asserted; turn a broken one into an input error
    // instead of an abort.
    panic::set_hook(Box::new(|_| {}));
    match panic::catch_unwind(|| commands::dispatch(&cli)) {
        Ok(outcome) => outcome,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown failure");
            anyhow::bail!("internal check failed: {msg}")
        }
    }
}
