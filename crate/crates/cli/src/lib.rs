//! Command-line front end for `fracalc-core`.
//!
//! Exit codes: 0 when everything passes, 1 when an identity check or an
//! order requirement fails, 2 for bad flags, config files, function specs or
//! output paths, 3 when a numerical routine rejects its input.

pub mod commands;
pub mod config;
pub mod dsl;
pub mod error;
pub mod suites;

use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, CommandName, RunConfig};
use error::{CliError, EXIT_CONFIG, EXIT_PASS, EXIT_PRECONDITION};

/// Caps rayon's global pool at `FRACALC_THREADS` when it is set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FRACALC_THREADS") else {
        return Ok(());
    };
    let k: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| CliError::config(format!("FRACALC_THREADS must be a positive integer, got '{raw}'")))?;
    // A pool that already exists (a second run in the same process) is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    configure_threads()?;
    let (name, inv) = cli.command.split();
    let cfg = RunConfig::resolve(name, inv)?;
    if let Some(path) = &inv.write_config {
        let mut bytes = serde_json::to_vec_pretty(&cfg).map_err(|e| CliError::config(e.to_string()))?;
        bytes.push(b'\n');
        fracalc_core::io::write_atomic(path, &bytes)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    }
    match name {
        CommandName::Compute => commands::compute(&cfg),
        CommandName::Verify => commands::verify(&cfg),
        CommandName::Convergence => commands::convergence(&cfg),
        CommandName::Norm => commands::norm(&cfg),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_CONFIG,
            };
        }
    };
    match catch_unwind(AssertUnwindSafe(|| dispatch(&cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("{e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal failure while running the command");
            EXIT_PRECONDITION
        }
    }
}
