//! `signlp`: shock identification, sign-dependent local projections and
//! synthetic panels from the command line.

mod check;
mod error;
mod estimate;
mod identify;
mod output;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "signlp", version, about = "Sign-dependent local projections for panel data")]
struct Cli {
    /// Worker threads (0 uses every core). Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a monthly shock series from announcement surprises.
    Identify(identify::IdentifyArgs),
    /// Estimate impulse responses for one regression family.
    Estimate(estimate::EstimateArgs),
    /// Draw a synthetic panel with known responses.
    Simulate(simulate::SimulateArgs),
    /// Run the invariant suite on a panel and shock series.
    Check(check::CheckArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Identify(a) => identify::run(&a),
        Command::Estimate(a) => estimate::run(&a),
        Command::Simulate(a) => simulate::run(&a),
        Command::Check(a) => check::run(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
