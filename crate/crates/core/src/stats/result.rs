use serde::{Deserialize, Serialize};

use super::DEFAULT_P_FLOOR;

/// Version of the TestResult / AggregateResult JSON layout.
pub const RESULT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Permutation,
    Sharded,
}

impl std::fmt::Display for TestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TestKind::Permutation => "permutation",
            TestKind::Sharded => "sharded",
        })
    }
}

impl std::str::FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "permutation" => Ok(TestKind::Permutation),
            "sharded" => Ok(TestKind::Sharded),
            _ => Err(format!("unknown test kind `{s}` (expected sharded or permutation)")),
        }
    }
}

/// `num_permutations` is per shard for the sharded test and in total for
/// the permutation test, which always uses a single whole-dataset shard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub test_kind: TestKind,
    pub num_shards: usize,
    pub num_permutations: usize,
    pub master_seed: u64,
    pub p_floor: f64,
}

impl TestConfig {
    pub fn sharded(num_shards: usize, num_permutations: usize, master_seed: u64) -> Self {
        Self {
            test_kind: TestKind::Sharded,
            num_shards,
            num_permutations,
            master_seed,
            p_floor: DEFAULT_P_FLOOR,
        }
    }

    pub fn permutation(num_permutations: usize, master_seed: u64) -> Self {
        Self {
            test_kind: TestKind::Permutation,
            num_shards: 1,
            num_permutations,
            master_seed,
            p_floor: DEFAULT_P_FLOOR,
        }
    }

    pub fn with_seed(&self, master_seed: u64) -> Self {
        Self {
            master_seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.num_permutations < 1 {
            return Err("num_permutations must be at least 1".into());
        }
        if self.num_permutations > u32::MAX as usize {
            return Err("num_permutations is too large".into());
        }
        if self.test_kind == TestKind::Sharded && self.num_shards < 2 {
            return Err("the sharded test needs at least 2 shards".into());
        }
        if !(self.p_floor > 0.0 && self.p_floor < 1.0) {
            return Err(format!("p_floor must lie in (0, 1), got {}", self.p_floor));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShardedStats {
    pub shard_sizes: Vec<usize>,
    pub canonical_logprobs: Vec<f64>,
    pub shuffled_mean_logprobs: Vec<f64>,
    /// s_i = canonical − mean shuffled, per shard.
    pub shard_stats: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Absent when the shard statistics have zero spread.
    pub t_statistic: Option<f64>,
    pub degrees_of_freedom: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationStats {
    pub canonical_logprob: f64,
    pub permuted_logprobs: Vec<f64>,
    pub exceed_count: usize,
}

/// Everything about one test run. Serialized as the audit result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub schema_version: u32,
    pub tool_version: String,
    pub test_kind: TestKind,
    pub config: TestConfig,
    pub dataset: String,
    pub dataset_size: usize,
    pub oracle: String,
    pub p_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharded: Option<ShardedStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<PermutationStats>,
    #[serde(default)]
    pub wall_time_seconds: Option<f64>,
}

impl TestResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("results serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredJob {
    pub shard: usize,
    /// `None` for the canonical ordering.
    pub permutation: Option<u32>,
    pub logprob: Option<f64>,
}

/// What survived a run that an oracle failure cut short.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialRun {
    pub schema_version: u32,
    pub tool_version: String,
    pub test_kind: TestKind,
    pub config: TestConfig,
    pub dataset: String,
    pub oracle: String,
    pub error: String,
    pub scores: Vec<ScoredJob>,
}

impl PartialRun {
    pub fn completed(&self) -> usize {
        self.scores.iter().filter(|s| s.logprob.is_some()).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("partial results serialize");
        s.push('\n');
        s
    }
}
