use std::process::ExitCode;

use clap::Parser;
use kernelcast::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kernelcast: error[{}]: {e}", e.code());
            ExitCode::FAILURE
        }
    }
}
