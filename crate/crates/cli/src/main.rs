//! `aperiodic`: command-line front end. Each subcommand wraps one library
//! operation and prints its result as CSV (default), JSON or bare text.
//!
//! Exit codes: 0 success, 1 domain or contract error, 2 parse or usage
//! error, 3 budget exceeded.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use output::{invocation, Sink};

#[derive(Debug)]
pub enum CliError {
    Lib(aperiodic::Error),
    Io(String),
    Usage(String),
}

impl From<aperiodic::Error> for CliError {
    fn from(e: aperiodic::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use aperiodic::Error;
        match self {
            CliError::Lib(Error::Parse { .. }) | CliError::Usage(_) => 2,
            CliError::Lib(Error::Budget(_)) => 3,
            CliError::Lib(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Usage(e) => write!(f, "usage error: {e}"),
        }
    }
}

fn run(cli: Cli, argv: &[String]) -> Result<(), CliError> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let default = match cli.command {
        Command::Generate { .. } | Command::TilingComplete { .. } => Format::Text,
        Command::Gibbs { .. } | Command::Anneal { .. } => Format::Json,
        _ => Format::Csv,
    };
    let format = cli.common.format.unwrap_or(default);
    let report = commands::execute(cli.command)?;
    let sink = Sink {
        out: cli.common.out,
        invocation: invocation(argv),
    };
    sink.emit(report, format)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aperiodic: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
