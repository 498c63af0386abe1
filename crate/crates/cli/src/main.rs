mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Ensemble(a) => commands::ensemble(a),
        Command::Theory(c) => commands::theory(c),
        Command::Verify(c) => commands::verify(c),
        Command::Oracle(a) => commands::oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
