mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = match cli.command {
        Command::Test(a) => commands::test(&a, cli.format),
        Command::Critvals(a) => commands::critvals(&a, cli.format),
        Command::Power(a) => commands::power(&a, cli.format),
        Command::Efficiency(a) => commands::efficiency(&a, cli.format),
        Command::Demo(a) => commands::demo(&a, cli.format),
    };
    let text = match result {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match out {
        Some(path) => std::fs::write(&path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::FAILURE
        }
    }
}
