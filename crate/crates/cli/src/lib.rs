//! Front end for the `gfd` binary: argument parsing, command dispatch and
//! CSV / JSON reporting.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

pub use commands::{run, Outcome};
pub use config::{Cli, RunConfig};
pub use error::{CliError, CliResult};

use error::{EXIT_OK, EXIT_USAGE};

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set up {t} worker threads: {e}")))?;
    }
    Ok(())
}

fn execute_config(cfg: &RunConfig) -> CliResult<Outcome> {
    configure_threads(cfg.threads)?;
    let outcome = run(cfg)?;
    output::write_output(&outcome.bytes, cfg.output.as_deref())?;
    Ok(outcome)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn execute<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| execute_config(&cfg));
    match result {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            outcome.status
        }
        Err(e) => {
            eprintln!("gfd: {e}");
            e.exit_code()
        }
    }
}
