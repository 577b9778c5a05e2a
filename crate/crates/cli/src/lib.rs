//! Command-line driver: single-instance queries, grid sweeps and the
//! verification suites, emitting CSV or JSON.
//!
//! Exit codes: 0 success, 2 argument error, 3 cap violation, 4 failed
//! verification. Errors print one `error: kind=<kind> reason=<text>` line on
//! stderr.

pub mod args;
mod commands;
pub mod grid;
pub mod output;
pub mod verify;

use std::fmt::Display;
use std::io::Write;

use clap::Parser;

use args::Cli;
use bpl_core::Budget;

/// Errors mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn io(e: impl Display) -> Self {
        CliError::Io(e.to_string())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Argument(_) => "argument",
            CliError::Cap(_) => "cap",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap(_) => 3,
            CliError::Argument(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<bpl_core::Error> for CliError {
    fn from(e: bpl_core::Error) -> Self {
        if e.is_capacity() {
            CliError::Cap(e.to_string())
        } else {
            CliError::Argument(e.to_string())
        }
    }
}

/// Exit code for a run whose output reports failed checks.
pub const EXIT_VERIFICATION: i32 = 4;

fn budget(cli: &Cli) -> Budget {
    Budget {
        restarts: cli.global.budget.max(1),
        iterations: cli.global.iters.max(1),
        tolerance: cli.global.tol,
        seed: cli.global.seed,
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("BPL_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(CliError::Argument(format!("BPL_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if !(cli.global.tol > 0.0 && cli.global.tol < 1.0) {
        return Err(CliError::Argument(format!("--tol must lie in (0, 1), got {}", cli.global.tol)));
    }
    let table = commands::dispatch(cli, &budget(cli))?;
    let config = serde_json::to_value(cli).map_err(CliError::io)?;
    let bytes = output::render(&table, &config, cli.global.format)?;
    match &cli.global.output {
        Some(path) => std::fs::write(path, &bytes).map_err(CliError::io)?,
        None => std::io::stdout().write_all(&bytes).map_err(CliError::io)?,
    }
    Ok(if table.failures.is_empty() { 0 } else { EXIT_VERIFICATION })
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let reason = e.to_string();
            let first = reason.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error: kind=argument reason={first}");
            return 2;
        }
    };
    let outcome = thread_count().and_then(|threads| match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(CliError::io)
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: kind={} reason={}", e.kind(), e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}
