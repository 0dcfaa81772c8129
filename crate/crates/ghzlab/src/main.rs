use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ghzlab::pipeline::{run_lhv, run_overlap, run_sample, run_verify};
use ghzlab::report::Report;
use ghzlab::{AppError, Limits};

/// Concurrent observables and GHZ contradictions for qudits.
#[derive(Parser, Debug)]
#[command(name = "ghzlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Local dimension.
    #[arg(long)]
    d: usize,
    /// Number of parties (odd, at least 3).
    #[arg(long)]
    n: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenrelations, incompatibility, LHV verdict and overlaps for one (d, N).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample joint outcomes for one setting pattern, e.g. XYY.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        settings: String,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Overlap matrix between the X and Y eigenbases.
    Overlap {
        #[command(flatten)]
        common: Common,
    },
    /// Local-hidden-variable constraint system and its verdict.
    Lhv {
        #[command(flatten)]
        common: Common,
    },
}

fn emit(report: &impl Report, out: Option<&PathBuf>) -> Result<bool, AppError> {
    let text = report.to_text()?;
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(report.pass())
}

fn run(cli: Cli) -> Result<bool, AppError> {
    let limits = Limits::from_env()?;
    match cli.command {
        Command::Verify { common, tol, seed } => emit(
            &run_verify(common.d, common.n, tol, seed, &limits)?,
            common.out.as_ref(),
        ),
        Command::Sample {
            common,
            settings,
            shots,
            seed,
        } => emit(
            &run_sample(common.d, common.n, &settings, shots, seed, &limits)?,
            common.out.as_ref(),
        ),
        Command::Overlap { common } => {
            limits.check_amplitudes(common.d, common.n)?;
            emit(&run_overlap(common.d, common.n)?, common.out.as_ref())
        }
        Command::Lhv { common } => {
            emit(&run_lhv(common.d, common.n, &limits)?, common.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
