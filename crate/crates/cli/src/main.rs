use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use omegalam_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(report) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
            eprintln!("{}", report.summary());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
