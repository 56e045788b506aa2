mod cli;
mod commands;
mod config;
mod error;
mod report;

use clap::Parser;

use crate::cli::{Cli, SUBCOMMANDS};
use crate::error::CliResult;

fn run(args: Vec<String>) -> CliResult<()> {
    let args = config::merge_config(args, SUBCOMMANDS)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(e.exit_code());
        }
    };
    commands::dispatch(cli.command)
}

fn main() {
    let code = match run(std::env::args().collect()) {
        Ok(()) => 0,
        Err(e) if e.is_broken_pipe() => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
