use std::process::ExitCode;

use clap::Parser;
use holonomy_lab::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("holonomy-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
