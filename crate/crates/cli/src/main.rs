mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{CliError, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    let code = match commands::run(cli, &mut out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Eval(e)) => {
            eprintln!("evaluation error: {e}");
            3
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            3
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
