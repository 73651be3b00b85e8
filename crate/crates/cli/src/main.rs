use std::process::ExitCode;

use clap::Parser;

use empsup_cli::{run, Cli, USAGE_EXIT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
