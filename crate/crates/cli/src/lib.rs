//! The `fdglm` command-line tool: CSV-driven GLM fits, design diagnostics and
//! seeded limit-theorem simulations.
//!
//! Exit codes: 0 on success, 1 on input or usage errors, 2 when a fit does
//! not converge.

pub mod args;
pub mod commands;
pub mod config;
pub mod dataset;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{CliError, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_OK};
pub use dataset::{load_csv, DataError, DatasetSpec, LoadedData, NaPolicy};
pub use report::FitReport;

use args::{Cli, Command};

/// The `--config` value, looked up before clap sees the arguments so that the
/// file can supply required flags.
fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(v.into());
        }
    }
    None
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config_path(&argv) {
        None => argv,
        Some(path) => match config::config_flags(std::path::Path::new(&path), &argv) {
            // Config flags go right after the subcommand so positionals stay in place.
            Ok(extra) => {
                let at = argv
                    .iter()
                    .position(|a| matches!(a.to_str(), Some("fit" | "diagnose" | "sim")))
                    .map_or(argv.len(), |i| i + 1);
                let mut merged = argv[..at].to_vec();
                merged.extend(extra);
                merged.extend_from_slice(&argv[at..]);
                merged
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
        },
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return clap_exit(e, out, err),
    };
    let result = match &cli.command {
        Command::Fit(a) => commands::cmd_fit(a, out, err),
        Command::Diagnose(a) => commands::cmd_diagnose(a, out, err),
        Command::Sim(a) => commands::cmd_sim(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    if e.use_stderr() {
        let _ = write!(err, "{text}");
        EXIT_INPUT
    } else {
        let _ = write!(out, "{text}");
        EXIT_OK
    }
}
