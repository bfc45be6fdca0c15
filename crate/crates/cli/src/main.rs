use std::process::ExitCode;

use clap::Parser;
use rankexp_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = cli.json_errors;
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if json_errors {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("rankexp: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
