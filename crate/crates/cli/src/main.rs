use std::process::ExitCode;

use clap::Parser;
use flp_cli::{args::Cli, run};

fn main() -> ExitCode {
    match run::execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flp: {e}");
            ExitCode::from(e.code())
        }
    }
}
