use std::process::ExitCode;

use clap::Parser;
use lambda_detector::cli::{run, strict_failure, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            if strict_failure(&cli, &summary) {
                eprintln!("{} flagged point(s)", summary.flagged);
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
