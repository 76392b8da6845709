use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::ExampleDataset;
use crate::oracle::LogProbOracle;
use crate::rng::derive_seed;
use crate::stats::{run_test, RunOptions, TestConfig, RESULT_SCHEMA_VERSION, TOOL_VERSION};

use super::{config_hash, label, mean, read_json, to_pretty_json, HarnessError, RowStatus, TAG_TEST};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Shards,
    Permutations,
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepAxis::Shards => "shards",
            SweepAxis::Permutations => "permutations",
        })
    }
}

/// Varies one parameter of the sharded test while holding the other at
/// `fixed`. Exactly one of `model` (an n-gram model file) and `oracle` (any
/// oracle spec) names the model under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<usize>,
    pub fixed: usize,
    pub datasets: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_examples: Option<usize>,
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        read_json(path)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.values.is_empty() {
            return bad("sweep values must not be empty");
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required");
        }
        if self.model.is_some() == self.oracle.is_some() {
            return bad("give exactly one of `model` and `oracle`");
        }
        let fixed_ok = match self.axis {
            SweepAxis::Shards => self.fixed >= 1,
            SweepAxis::Permutations => self.fixed >= 2,
        };
        if !fixed_ok {
            return bad("`fixed` must be at least 1 permutation or 2 shards");
        }
        Ok(())
    }

    pub fn test_config(&self, value: usize, master_seed: u64) -> TestConfig {
        match self.axis {
            SweepAxis::Shards => TestConfig::sharded(value, self.fixed, master_seed),
            SweepAxis::Permutations => TestConfig::sharded(self.fixed, value, master_seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: usize,
    pub dataset: String,
    pub seed: u64,
    pub master_seed: u64,
    pub num_shards: usize,
    pub num_permutations: usize,
    pub p_value: Option<f64>,
    pub log10_p: Option<f64>,
    pub status: RowStatus,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: usize,
    pub runs: usize,
    pub skipped: usize,
    pub failed: usize,
    pub mean_log10_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub axis: SweepAxis,
    pub fixed: usize,
    pub config_hash: String,
    pub oracle: String,
    pub points: Vec<SweepPoint>,
    /// The axis value with the lowest mean log10 p.
    pub argmin: Option<usize>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        to_pretty_json(self)
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Error).count()
    }

    /// One line per axis value: `value,runs,skipped,failed,mean_log10_p`.
    pub fn points_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            writer.serialize(p).expect("points serialize");
        }
        String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }

    pub fn rows_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            writer.serialize(r).expect("rows serialize");
        }
        String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

/// Runs the sharded test for every (value, dataset, seed). The master seed
/// of a row depends only on the dataset and seed, so permutation sets for a
/// smaller count are prefixes of those for a larger one.
pub fn sensitivity_sweep(
    config: &SweepConfig,
    datasets: &[ExampleDataset],
    oracle: &dyn LogProbOracle,
) -> Result<SweepReport, HarnessError> {
    config.validate()?;
    if datasets.is_empty() {
        return Err(HarnessError::Config("no datasets to sweep".into()));
    }
    let jobs: Vec<(usize, usize, u64)> = config
        .values
        .iter()
        .flat_map(|&v| (0..datasets.len()).flat_map(move |d| config.seeds.iter().map(move |&s| (v, d, s))))
        .collect();

    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(value, d, seed)| {
            let dataset = &datasets[d];
            let master_seed = derive_seed(seed, &[TAG_TEST, label(dataset.name())]);
            let test = config.test_config(value, master_seed);
            let mut row = SweepRow {
                value,
                dataset: dataset.name().to_string(),
                seed,
                master_seed,
                num_shards: test.num_shards,
                num_permutations: test.num_permutations,
                p_value: None,
                log10_p: None,
                status: RowStatus::Skipped,
                reason: String::new(),
            };
            if let Err(reason) = test.validate() {
                row.reason = reason;
                return row;
            }
            if dataset.len() < 2 * test.num_shards {
                row.reason = format!(
                    "{} examples cannot fill {} shards of at least 2",
                    dataset.len(),
                    test.num_shards
                );
                return row;
            }
            match run_test(dataset, oracle, &test, &RunOptions::default()) {
                Ok(r) => {
                    row.p_value = Some(r.p_value);
                    row.log10_p = Some(r.p_value.log10());
                    row.status = RowStatus::Ok;
                }
                Err(e) => {
                    row.status = RowStatus::Error;
                    row.reason = e.to_string();
                }
            }
            row
        })
        .collect();

    let points: Vec<SweepPoint> = config
        .values
        .iter()
        .map(|&value| {
            let group: Vec<&SweepRow> = rows.iter().filter(|r| r.value == value).collect();
            let logs: Vec<f64> = group.iter().filter_map(|r| r.log10_p).collect();
            SweepPoint {
                value,
                runs: logs.len(),
                skipped: group.iter().filter(|r| r.status == RowStatus::Skipped).count(),
                failed: group.iter().filter(|r| r.status == RowStatus::Error).count(),
                mean_log10_p: mean(&logs),
            }
        })
        .collect();
    let argmin = points
        .iter()
        .filter_map(|p| p.mean_log10_p.map(|m| (p.value, m)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(v, _)| v);

    Ok(SweepReport {
        schema_version: RESULT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        axis: config.axis,
        fixed: config.fixed,
        config_hash: config_hash(config),
        oracle: oracle.name().to_string(),
        points,
        argmin,
        rows,
    })
}
