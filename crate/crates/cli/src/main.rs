use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use perfect_forms_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<i32> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = run(cli, &mut out)?;
    out.flush().context("flushing stdout")?;
    Ok(code)
}
