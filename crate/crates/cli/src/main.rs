mod args;
mod commands;
mod error;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Clock;

fn main() -> ExitCode {
    // usage errors share the parse-error exit code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut clock = Clock::new(cli.quiet);
    let result = match &cli.command {
        Command::Range(a) => commands::range(a, &mut clock),
        Command::Analyze(a) => commands::analyze(a, &mut clock),
        Command::Verify(a) => commands::verify(a, &mut clock),
        Command::ExampleRs(a) => commands::example_rs(a, &mut clock),
        Command::Potential(a) => commands::potential(a, &mut clock),
        Command::Measure(a) => commands::measure(a, &mut clock),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
