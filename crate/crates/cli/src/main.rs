use clap::Parser;
use mwi::args::Cli;
use mwi::{execute, CliError};
use std::io::Write;
use std::process::ExitCode;

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = execute(&cli.command)?;
    if !out.files.is_empty() {
        std::fs::create_dir_all(&cli.out_dir)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", cli.out_dir.display())))?;
        for (name, bytes) in &out.files {
            let path = cli.out_dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    std::io::stdout()
        .write_all(out.stdout.as_bytes())
        .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
