//! Hypothesis tests for order memorization and the numerics behind them.

mod aggregate;
mod ecdf;
mod permutation;
mod result;
mod sharded;
pub mod special;

pub use aggregate::{filtered_aggregate, fisher_combine, fisher_combine_named, AggregateResult, Component, ControlSet, Exclusion};
pub use ecdf::{ecdf, ks_statistic, Ecdf, EcdfPoint};
pub use permutation::{permutation_p_value, permutation_test};
pub use result::{
    PartialRun, PermutationStats, ScoredJob, ShardedStats, TestConfig, TestKind, TestResult, RESULT_SCHEMA_VERSION,
};
pub use sharded::{one_sided_t_test, sharded_test, TTestOutcome};
pub use special::{chi2_sf, t_sf};

use std::time::Instant;

use rayon::prelude::*;

use crate::dataset::{seq, DatasetError, ExampleDataset};
use crate::oracle::{LogProbOracle, OracleError, RetryPolicy};

/// Reporting floor for p-values; smaller values are treated as numerically zero.
pub const DEFAULT_P_FLOOR: f64 = 1e-38;

pub const TOOL_VERSION: &str = concat!("ordertest ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("no p-values given")]
    Empty,
    #[error("p-value for `{name}` must lie in (0, 1], got {value}")]
    InvalidPValue { name: String, value: f64 },
    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("no exchangeable components remain: every dataset was flagged by a control")]
    AllExcluded,
    #[error("control `{control}` has no p-value for dataset `{dataset}`")]
    MissingControlValue { control: String, dataset: String },
    #[error("need at least 2 shard statistics for a t-test, got {0}")]
    TooFewShards(usize),
}

#[derive(Debug, thiserror::Error)]
pub enum TestError {
    #[error("invalid test configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("{source}")]
    Oracle {
        #[source]
        source: OracleError,
        partial: Box<PartialRun>,
    },
}

impl TestError {
    pub fn partial(&self) -> Option<&PartialRun> {
        match self {
            TestError::Oracle { partial, .. } => Some(partial),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub retry: RetryPolicy,
    /// Wall time is left out of results unless asked for, so that result
    /// files stay byte-identical across reruns.
    pub record_wall_time: bool,
}

/// Runs the test described by `config` against `dataset`.
pub fn run_test(
    dataset: &ExampleDataset,
    oracle: &dyn LogProbOracle,
    config: &TestConfig,
    options: &RunOptions,
) -> Result<TestResult, TestError> {
    config.validate().map_err(TestError::Config)?;
    let started = Instant::now();
    let mut result = match config.test_kind {
        TestKind::Permutation => permutation::run(dataset, oracle, config, options)?,
        TestKind::Sharded => sharded::run(dataset, oracle, config, options)?,
    };
    if options.record_wall_time {
        result.wall_time_seconds = Some(started.elapsed().as_secs_f64());
    }
    Ok(result)
}

/// Scores one job per `(shard, permutation)` pair in parallel, keeping job
/// order. On failure, every completed score is kept in the error.
pub(crate) fn score_jobs(
    dataset: &ExampleDataset,
    oracle: &dyn LogProbOracle,
    config: &TestConfig,
    ranges: &[std::ops::Range<usize>],
    options: &RunOptions,
) -> Result<Vec<Vec<f64>>, TestError> {
    let m = config.num_permutations;
    let examples = dataset.examples();
    let jobs: Vec<(usize, Option<u32>)> = (0..ranges.len())
        .flat_map(|s| std::iter::once((s, None)).chain((0..m as u32).map(move |p| (s, Some(p)))))
        .collect();

    let outcomes: Vec<Result<f64, OracleError>> = jobs
        .par_iter()
        .map(|&(shard, perm)| {
            let slice = &examples[ranges[shard].clone()];
            let text = match perm {
                None => seq(slice.iter().map(|e| e.text.as_str())),
                Some(p) => {
                    let pi = crate::dataset::sample_permutation(slice.len(), config.master_seed, shard as u32, p)
                        .expect("shards hold at least 2 examples");
                    seq(pi.apply(slice).map(|e| e.text.as_str()))
                }
            };
            options.retry.score(oracle, &text)
        })
        .collect();

    if let Some(err) = outcomes.iter().find_map(|o| o.as_ref().err()) {
        let partial = PartialRun {
            schema_version: RESULT_SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            test_kind: config.test_kind,
            config: config.clone(),
            dataset: dataset.name().to_string(),
            oracle: oracle.name().to_string(),
            error: err.to_string(),
            scores: jobs
                .iter()
                .zip(&outcomes)
                .map(|(&(shard, permutation), o)| ScoredJob {
                    shard,
                    permutation,
                    logprob: o.as_ref().ok().copied(),
                })
                .collect(),
        };
        return Err(TestError::Oracle {
            source: err.clone(),
            partial: Box::new(partial),
        });
    }

    let mut flat = outcomes.into_iter().map(|o| o.expect("checked above"));
    Ok((0..ranges.len()).map(|_| flat.by_ref().take(m + 1).collect()).collect())
}
