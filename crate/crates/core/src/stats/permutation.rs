use crate::dataset::ExampleDataset;
use crate::oracle::LogProbOracle;

use super::{
    run_test, score_jobs, PermutationStats, RunOptions, TestConfig, TestError, TestKind, TestResult,
    RESULT_SCHEMA_VERSION, TOOL_VERSION,
};

/// Monte Carlo permutation p-value with the +1 correction.
///
/// A permutation exceeds the canonical ordering only if it scores strictly
/// higher; ties count against contamination. Returns `(exceed_count, p)`.
pub fn permutation_p_value(canonical: f64, permuted: &[f64]) -> (usize, f64) {
    let exceed = permuted.iter().filter(|&&l| canonical < l).count();
    (exceed, (exceed + 1) as f64 / (permuted.len() + 1) as f64)
}

pub fn permutation_test(
    dataset: &ExampleDataset,
    oracle: &dyn LogProbOracle,
    num_permutations: usize,
    seed: u64,
) -> Result<TestResult, TestError> {
    run_test(
        dataset,
        oracle,
        &TestConfig::permutation(num_permutations, seed),
        &RunOptions::default(),
    )
}

pub(super) fn run(
    dataset: &ExampleDataset,
    oracle: &dyn LogProbOracle,
    config: &TestConfig,
    options: &RunOptions,
) -> Result<TestResult, TestError> {
    if dataset.len() < 2 {
        return Err(TestError::Config(format!(
            "the permutation test needs at least 2 examples, `{}` has {}",
            dataset.name(),
            dataset.len()
        )));
    }
    let scores = score_jobs(dataset, oracle, config, &[0..dataset.len()], options)?;
    let (canonical, permuted) = scores[0].split_first().expect("canonical score present");
    let (exceed_count, p_value) = permutation_p_value(*canonical, permuted);
    Ok(TestResult {
        schema_version: RESULT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        test_kind: TestKind::Permutation,
        config: config.clone(),
        dataset: dataset.name().to_string(),
        dataset_size: dataset.len(),
        oracle: oracle.name().to_string(),
        p_value,
        sharded: None,
        permutation: Some(PermutationStats {
            canonical_logprob: *canonical,
            permuted_logprobs: permuted.to_vec(),
            exceed_count,
        }),
        wall_time_seconds: None,
    })
}
