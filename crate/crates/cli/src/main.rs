mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};

/// Machine-readable failure printed to stderr as JSON.
#[derive(Debug, Serialize)]
pub struct CliError {
    error: String,
    message: String,
}

impl CliError {
    fn new(kind: &str, message: impl Into<String>) -> Self {
        Self {
            error: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("UsageError", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new("IoError", message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new("ParseError", message)
    }
}

impl From<fockkernel::Error> for CliError {
    fn from(e: fockkernel::Error) -> Self {
        Self::new(e.kind(), e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("FOCKKERNEL_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::usage(format!(
                "FOCKKERNEL_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Certify(a) => commands::certify(a),
        Command::Cnd(a) => commands::cnd(a),
        Command::Separate(a) => commands::separate(a),
        Command::Lift(a) => commands::lift(a),
        Command::Embed(a) => commands::embed(a),
        Command::Approximate(a) => commands::approximate(a),
    }
}

fn fail(err: &CliError) -> ExitCode {
    let json = serde_json::to_string(err).unwrap_or_else(|_| format!("{err:?}"));
    eprintln!("{json}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::usage(e.render().to_string().trim_end())),
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(&e),
    }
}
