//! Command-line front end for the `contour-duo` library.

pub mod args;
pub mod commands;
pub mod report;

use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::{CliResult, EXIT_INVALID};

/// Worker-count cap read from the environment.
pub const THREADS_ENV: &str = "CONTOUR_DUO_THREADS";

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Simulate(a) => commands::cmd_simulate(a, stdout),
        Command::Cycle(a) => commands::cmd_cycle(a, stdout),
        Command::Classify(a) => commands::cmd_classify(a, stdout),
        Command::Diagram(a) => commands::cmd_diagram(a, stdout),
        Command::Sweep(a) => commands::cmd_sweep(a, stdout),
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Parses `argv`, runs the command and returns the process exit code.
/// Diagnostics go to stderr.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = thread_cap() {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
