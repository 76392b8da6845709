use std::path::PathBuf;
use std::time::Duration;

use clap::Args;
use ordertest::dataset::load_dataset;
use ordertest::oracle::{open_oracle, OracleSpec, RemoteConfig, RetryPolicy};
use ordertest::stats::{run_test, RunOptions, TestConfig, TestError, TestKind, DEFAULT_P_FLOOR};

use crate::{usage, write_output, CliError};

const ALPHA: f64 = 0.05;

#[derive(Debug, Args)]
pub(crate) struct AuditArgs {
    /// Dataset file: JSONL with a `text` field per line, or plain text with
    /// one example per line.
    #[arg(long)]
    dataset: PathBuf,
    /// builtin:ngram=<model file>, cmd:<shell command> or tcp:<host>:<port>.
    #[arg(long)]
    oracle: OracleSpec,
    /// `sharded` or `permutation`.
    #[arg(long, default_value_t = TestKind::Sharded)]
    test: TestKind,
    /// Shards for the sharded test.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(2..))]
    shards: u32,
    /// Permutations per shard (sharded) or in total (permutation).
    #[arg(long, default_value_t = 250, value_parser = clap::value_parser!(u32).range(1..))]
    permutations: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Use only the first N examples.
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(2..))]
    max_examples: u64,
    /// Attempts per oracle call for transport failures.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    retries: u32,
    /// Seconds to wait for one remote scoring call.
    #[arg(long, default_value_t = 600)]
    request_timeout: u64,
    /// Record wall time in the result file (makes reruns differ).
    #[arg(long)]
    record_wall_time: bool,
    /// TestResult JSON output. On oracle failure, completed scores go to
    /// `<out>.partial.json`.
    #[arg(long)]
    out: PathBuf,
}

pub(crate) fn verdict(p: f64) -> String {
    if p < ALPHA {
        let mut v = format!("flags contamination at α={ALPHA}");
        if p >= 0.01 {
            v.push_str(" (borderline; interpret with caution)");
        }
        v
    } else {
        format!("no evidence at α={ALPHA}")
    }
}

pub(crate) fn run(args: AuditArgs, jobs: usize) -> Result<(), CliError> {
    let config = match args.test {
        TestKind::Sharded => TestConfig::sharded(args.shards as usize, args.permutations as usize, args.seed),
        TestKind::Permutation => TestConfig::permutation(args.permutations as usize, args.seed),
    };
    println!(
        "audit: dataset={} oracle={} test={} shards={} permutations={} seed={} max_examples={} p_floor={:e} retries={} request_timeout={}s jobs={} out={}",
        args.dataset.display(),
        args.oracle,
        args.test,
        args.shards,
        args.permutations,
        args.seed,
        args.max_examples,
        DEFAULT_P_FLOOR,
        args.retries,
        args.request_timeout,
        jobs,
        args.out.display()
    );

    let dataset = load_dataset(&args.dataset, Some(args.max_examples as usize)).map_err(usage)?;
    let remote = RemoteConfig {
        request_timeout: Duration::from_secs(args.request_timeout),
        ..RemoteConfig::default()
    };
    let oracle = open_oracle(&args.oracle, &remote).map_err(|e| CliError::Oracle(e.to_string()))?;
    let options = RunOptions {
        retry: RetryPolicy {
            max_attempts: args.retries,
            ..RetryPolicy::default()
        },
        record_wall_time: args.record_wall_time,
    };

    let result = match run_test(&dataset, oracle.as_ref(), &config, &options) {
        Ok(r) => r,
        Err(TestError::Oracle { source, partial }) => {
            let mut path = args.out.clone().into_os_string();
            path.push(".partial.json");
            let path = PathBuf::from(path);
            write_output(&path, &partial.to_json())?;
            return Err(CliError::Oracle(format!(
                "{source}; {} of {} scores kept in {}",
                partial.completed(),
                partial.scores.len(),
                path.display()
            )));
        }
        Err(e) => return Err(usage(e)),
    };
    write_output(&args.out, &result.to_json())?;

    println!("dataset: {} ({} examples)", result.dataset, result.dataset_size);
    println!("oracle:  {}", result.oracle);
    if let Some(s) = &result.sharded {
        match s.t_statistic {
            Some(t) => println!("test:    sharded, t = {t:.4} with {} df", s.degrees_of_freedom),
            None => println!("test:    sharded, shard statistics have zero spread"),
        }
    }
    if let Some(s) = &result.permutation {
        println!(
            "test:    permutation, {} of {} orderings scored higher",
            s.exceed_count,
            s.permuted_logprobs.len()
        );
    }
    println!("p-value: {:e}", result.p_value);
    println!("verdict: {}", verdict(result.p_value));
    println!("wrote {}", args.out.display());
    Ok(())
}
