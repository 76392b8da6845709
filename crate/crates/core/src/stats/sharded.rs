use serde::{Deserialize, Serialize};

use crate::dataset::{make_shard_plan, ExampleDataset};
use crate::oracle::LogProbOracle;

use super::special::t_sf;
use super::{
    run_test, score_jobs, RunOptions, ShardedStats, StatsError, TestConfig, TestError, TestKind, TestResult,
    RESULT_SCHEMA_VERSION, TOOL_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestOutcome {
    pub mean: f64,
    pub std: f64,
    pub t_statistic: Option<f64>,
    pub degrees_of_freedom: u32,
    pub p_value: f64,
}

/// One-sample, one-sided t-test of `E[s] > 0`.
///
/// Sums run in index order so the result does not depend on how the samples
/// were produced. With zero spread the t statistic is undefined and the
/// p-value takes its limit: `p_floor` for a positive mean, 1 otherwise.
pub fn one_sided_t_test(samples: &[f64], p_floor: f64) -> Result<TTestOutcome, StatsError> {
    let r = samples.len();
    if r < 2 {
        return Err(StatsError::TooFewShards(r));
    }
    let n = r as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    let df = (r - 1) as u32;
    let (t_statistic, p) = if std > 0.0 {
        let t = mean * n.sqrt() / std;
        (Some(t), t_sf(t, df))
    } else if mean > 0.0 {
        (None, p_floor)
    } else {
        (None, 1.0)
    };
    Ok(TTestOutcome {
        mean,
        std,
        t_statistic,
        degrees_of_freedom: df,
        p_value: p.clamp(p_floor, 1.0),
    })
}

pub fn sharded_test(
    dataset: &ExampleDataset,
    oracle: &dyn LogProbOracle,
    num_shards: usize,
    num_permutations: usize,
    seed: u64,
) -> Result<TestResult, TestError> {
    run_test(
        dataset,
        oracle,
        &TestConfig::sharded(num_shards, num_permutations, seed),
        &RunOptions::default(),
    )
}

pub(super) fn run(
    dataset: &ExampleDataset,
    oracle: &dyn LogProbOracle,
    config: &TestConfig,
    options: &RunOptions,
) -> Result<TestResult, TestError> {
    let plan = make_shard_plan(dataset.len(), config.num_shards)?;
    let ranges: Vec<_> = plan.ranges().collect();
    let scores = score_jobs(dataset, oracle, config, &ranges, options)?;

    let m = config.num_permutations as f64;
    let mut canonical = Vec::with_capacity(ranges.len());
    let mut shuffled = Vec::with_capacity(ranges.len());
    let mut stats = Vec::with_capacity(ranges.len());
    for shard in &scores {
        let (c, perms) = shard.split_first().expect("canonical score present");
        let mean_shuffled = perms.iter().sum::<f64>() / m;
        canonical.push(*c);
        shuffled.push(mean_shuffled);
        stats.push(c - mean_shuffled);
    }
    let outcome = one_sided_t_test(&stats, config.p_floor).expect("plan has at least 2 shards");

    Ok(TestResult {
        schema_version: RESULT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        test_kind: TestKind::Sharded,
        config: config.clone(),
        dataset: dataset.name().to_string(),
        dataset_size: dataset.len(),
        oracle: oracle.name().to_string(),
        p_value: outcome.p_value,
        sharded: Some(ShardedStats {
            shard_sizes: plan.sizes(),
            canonical_logprobs: canonical,
            shuffled_mean_logprobs: shuffled,
            shard_stats: stats,
            mean: outcome.mean,
            std: outcome.std,
            t_statistic: outcome.t_statistic,
            degrees_of_freedom: outcome.degrees_of_freedom,
        }),
        permutation: None,
        wall_time_seconds: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_two_three() {
        let out = one_sided_t_test(&[1.0, 2.0, 3.0], 1e-38).unwrap();
        assert_eq!(out.mean, 2.0);
        assert_eq!(out.std, 1.0);
        assert!((out.t_statistic.unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(out.degrees_of_freedom, 2);
        assert!((out.p_value - 0.037_089_950_113_724_27).abs() < 1e-12);
    }

    #[test]
    fn zero_mean_gives_one_half() {
        let out = one_sided_t_test(&[-1.0, 0.0, 1.0], 1e-38).unwrap();
        assert_eq!(out.t_statistic, Some(0.0));
        assert_eq!(out.p_value, 0.5);
    }

    #[test]
    fn zero_variance_rule() {
        let pos = one_sided_t_test(&[2.0; 5], 1e-38).unwrap();
        assert_eq!((pos.t_statistic, pos.p_value), (None, 1e-38));
        let neg = one_sided_t_test(&[-2.0; 5], 1e-38).unwrap();
        assert_eq!((neg.t_statistic, neg.p_value), (None, 1.0));
        let zero = one_sided_t_test(&[0.0; 5], 1e-38).unwrap();
        assert_eq!(zero.p_value, 1.0);
    }

    #[test]
    fn floor_applies_to_tiny_p() {
        let s: Vec<f64> = (0..50).map(|i| 100.0 + (i % 3) as f64 * 1e-3).collect();
        let out = one_sided_t_test(&s, 1e-38).unwrap();
        assert_eq!(out.p_value, 1e-38);
        assert!(one_sided_t_test(&[1.0], 1e-38).is_err());
    }
}
