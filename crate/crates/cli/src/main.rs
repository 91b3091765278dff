//! `sieve`: generate synthetic data, solve single problems and regularization
//! paths, and benchmark sieving against full-dimension baselines.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical non-convergence.
//! `SIEVE_THREADS` caps the worker pool (0 or unset = all cores).

mod args;
mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use run::{CliError, Outcome};

fn configure_threads() -> Result<(), String> {
    let threads = match std::env::var("SIEVE_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("SIEVE_THREADS must be a nonnegative integer, got {v:?}"))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // printing only fails if stdout/stderr is closed
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let result = match &cli.command {
        Command::Gen(a) => run::cmd_gen(a),
        Command::Solve(a) => run::cmd_solve(a),
        Command::Path(a) => run::cmd_path(a),
        Command::Bench(a) => run::cmd_bench(a),
    };
    match result {
        Ok(Outcome::Converged) => ExitCode::SUCCESS,
        Ok(Outcome::Flagged) => {
            eprintln!("warning: some solves stopped at the round cap before meeting the tolerance");
            ExitCode::from(2)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
