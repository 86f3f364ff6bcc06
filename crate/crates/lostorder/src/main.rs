use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lostorder::commands::{self, Outcome};
use lostorder::{Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lostorder: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.into_config()?;
    let (text, failed) = match commands::run(&config)? {
        Outcome::Text(t) => (t, 0),
        Outcome::Verify { text, failed } => (text, failed),
    };
    match &config.output {
        Some(path) => commands::write_file(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed });
    }
    Ok(())
}
