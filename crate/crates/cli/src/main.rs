//! `ordertest`: audit language models for benchmark contamination by testing
//! whether they prefer a dataset's published example order.
//!
//! Exit codes: 0 success, 1 the command ran but some rows or components
//! failed, 2 usage or configuration error, 3 oracle failure.

mod aggregate;
mod audit;
mod experiments;
mod serve;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ordertest", version, about, propagate_version = true)]
struct Cli {
    /// Worker threads; 0 uses every logical CPU. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a sharded or permutation test of one dataset against one model.
    Audit(audit::AuditArgs),
    /// Combine audit results with Fisher's method, dropping datasets that
    /// negative-control models flag.
    Aggregate(aggregate::AggregateArgs),
    /// Byte-level n-gram models.
    Ngram {
        #[command(subcommand)]
        command: NgramCommand,
    },
    /// Canary contamination experiments.
    Canary {
        #[command(subcommand)]
        command: CanaryCommand,
    },
    /// Check that a clean model gives uniform p-values on fresh datasets.
    Calibrate(experiments::CalibrateArgs),
    /// Vary the shard or permutation count and report mean log10 p.
    Sweep(experiments::SweepArgs),
    /// Remote oracle endpoints.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Write a synthetic exchangeable dataset as JSONL.
    Synth(experiments::SynthArgs),
}

#[derive(Debug, Subcommand)]
enum NgramCommand {
    /// Train a model on a corpus and write it to a file.
    Train(experiments::TrainArgs),
}

#[derive(Debug, Subcommand)]
enum CanaryCommand {
    /// Run the experiment described by a JSON config.
    Run(experiments::CanaryRunArgs),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Serve an n-gram model over the JSON-lines oracle protocol.
    Serve(serve::ServeArgs),
}

#[derive(Debug)]
pub(crate) enum CliError {
    /// Ran to completion but some rows or components failed.
    Partial(String),
    Usage(String),
    Oracle(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Partial(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Oracle(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Partial(m) | CliError::Usage(m) | CliError::Oracle(m) => f.write_str(m),
        }
    }
}

pub(crate) fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub(crate) fn write_output(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| usage(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = if cli.jobs == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        cli.jobs
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(2);
    }

    let result = match cli.command {
        Command::Audit(args) => audit::run(args, jobs),
        Command::Aggregate(args) => aggregate::run(args),
        Command::Ngram {
            command: NgramCommand::Train(args),
        } => experiments::train(args, jobs),
        Command::Canary {
            command: CanaryCommand::Run(args),
        } => experiments::canary_run(args, jobs),
        Command::Calibrate(args) => experiments::calibrate(args, jobs),
        Command::Sweep(args) => experiments::sweep(args, jobs),
        Command::Oracle {
            command: OracleCommand::Serve(args),
        } => serve::run(args),
        Command::Synth(args) => experiments::synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
