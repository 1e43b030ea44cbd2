use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use hvt_cli::args::{Cli, Invocation};
use hvt_cli::error::EXIT_ERROR;
use hvt_cli::{config_from_document, run, CliError, OutputFormat};

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let (config, format, out) = match cli.invocation()? {
        Invocation::Run {
            config,
            format,
            out,
        } => (config, format, out),
        Invocation::Rerun { file, format, out } => {
            let text = std::fs::read_to_string(&file).map_err(|source| CliError::Io {
                path: file.clone(),
                source,
            })?;
            (config_from_document(&text)?, format, out)
        }
    };
    let outcome = run(&config)?;
    emit(&outcome.render(format), out.as_deref())?;
    if format == OutputFormat::Text && outcome.mismatch {
        eprintln!("hvt: result disagrees with the expected outcome");
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hvt: {e}");
            ExitCode::from(e.exit_code().max(EXIT_ERROR))
        }
    }
}
