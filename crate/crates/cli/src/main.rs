use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use motive_calc_cli::{run_command, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run_command(&cli, &mut std::io::stdin().lock());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
