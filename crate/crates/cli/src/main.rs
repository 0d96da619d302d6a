//! `fwdest`: simulate, estimate, verify and run the recurrence checks.
//!
//! Exit codes: 0 ok, 1 runtime failure (including failed checks), 2 invalid
//! input. Validation messages name the offending field or line.

mod estimate;
mod lemmas;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "fwdest",
    version,
    about = "Forward estimation of next-symbol conditional expectations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write metrics.csv, tails.csv and manifest.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Add one estimate and one oracle column per symbol in distribution mode.
        #[arg(long)]
        wide: bool,
        /// Override experiment.base_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override experiment.workers.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Estimate the next-symbol law along a sequence read from a file.
    Estimate {
        file: PathBuf,
        /// Comma-separated symbol names, or one character per symbol.
        #[arg(long, default_value = "01")]
        alphabet: String,
        /// Read one symbol per line instead of a contiguous string.
        #[arg(long)]
        lines: bool,
        /// Print only the estimate after the last symbol.
        #[arg(long)]
        final_only: bool,
    },
    /// Compare the streaming index with the from-scratch evaluator on random sequences.
    Verify {
        #[arg(long, default_value_t = 2000)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check a deliberately broken index instead (harness self-test).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run the resampling, context-growth and return-time checks.
    Lemmas {
        /// Config document; a fair coin with default parameters if omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override lemmas.base_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override lemmas.workers.
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// A failure and the exit code it maps to.
pub enum Failure {
    Invalid(anyhow::Error),
    Runtime(anyhow::Error),
}

pub type Outcome = Result<(), Failure>;

pub fn invalid<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Invalid(e.into())
}

pub fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate {
            config,
            out,
            wide,
            seed,
            workers,
        } => simulate::run(&config, &out, wide, seed, workers),
        Command::Estimate {
            file,
            alphabet,
            lines,
            final_only,
        } => estimate::run(&file, &alphabet, lines, final_only),
        Command::Verify {
            max_n,
            cases,
            seed,
            inject_fault,
        } => verify(max_n, cases, seed, inject_fault),
        Command::Lemmas { config, seed, workers } => lemmas::run(config.as_deref(), seed, workers),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn verify(max_n: usize, cases: usize, seed: u64, inject_fault: bool) -> Outcome {
    use fwdest::verify::{run, verify_streaming, OffByOneLambda, VerifyConfig};
    use fwdest::StreamingEstimator;

    let cfg = VerifyConfig {
        max_n,
        cases,
        seed,
        ..VerifyConfig::default()
    };
    let result = if inject_fault {
        run(&cfg, |a, s, h| StreamingEstimator::new(a, s, h).map(OffByOneLambda))
    } else {
        verify_streaming(&cfg)
    };
    match result.map_err(invalid)? {
        Ok(summary) => {
            println!(
                "ok: {} cases, {} prefixes, {} exact comparisons",
                summary.cases, summary.prefixes, summary.comparisons
            );
            Ok(())
        }
        Err(cex) => Err(runtime(anyhow::anyhow!("mismatch: {cex}"))),
    }
}
