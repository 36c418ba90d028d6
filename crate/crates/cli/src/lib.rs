//! Library side of the `maxdep` command-line tool.
//!
//! Exit codes are stable: 0 on success, 1 on data or runtime failures,
//! 2 on usage errors.

pub mod commands;
pub mod csv_io;
pub mod error;

use std::io::Write;
use std::path::Path;

pub use commands::{Cli, Command};
pub use error::{CliError, Result};

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Runs one parsed invocation, writing results to the requested sink.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => {
            let outcome = commands::cmd_estimate(&args)?;
            if outcome.dropped_rows > 0 {
                eprintln!("note: dropped {} incomplete row(s)", outcome.dropped_rows);
            }
            emit(
                &commands::render_reports(&outcome.reports, args.format),
                args.output.as_deref(),
            )
        }
        Command::Theory(args) => {
            let report = commands::cmd_theory(&args)?;
            emit(
                &commands::render_theory(&report, args.format),
                args.output.as_deref(),
            )
        }
        Command::Simulate(args) => emit(&commands::cmd_simulate(&args)?, args.output.as_deref()),
    }
}
