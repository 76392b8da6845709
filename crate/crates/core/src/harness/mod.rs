//! End-to-end experiments on n-gram models: canary contamination studies,
//! null calibration and sensitivity sweeps.
//!
//! Every experiment is a pure function of its config. Rows run in parallel
//! but are collected in a fixed order, so reports are byte-identical for
//! any degree of parallelism.

mod calibration;
mod canary;
mod plot;
mod sweep;

pub use calibration::{run_null_calibration, AlphaFraction, CalibrationConfig, CalibrationReport, CALIBRATION_ALPHAS};
pub use canary::{
    read_rows_csv, run_canary_experiment, summarize_rows, write_rows_csv, CanaryDef, CanaryExperimentConfig,
    CanaryReport, CanarySummary, ControlDef, ControlSummary, DupSummary, ExperimentRow, Role,
};
pub use plot::power_plot_svg;
pub use sweep::{sensitivity_sweep, SweepAxis, SweepConfig, SweepPoint, SweepReport, SweepRow};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::DatasetError;
use crate::ngram::NGramError;
use crate::oracle::OracleError;
use crate::stats::{StatsError, TestConfig, TestKind, DEFAULT_P_FLOOR};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    NGram(#[from] NGramError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// A test to run on every dataset of an experiment. Seeds are filled in per
/// row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSpec {
    pub test_kind: TestKind,
    #[serde(default = "default_shards")]
    pub num_shards: usize,
    #[serde(default = "default_permutations")]
    pub num_permutations: usize,
    #[serde(default = "default_p_floor")]
    pub p_floor: f64,
}

fn default_shards() -> usize {
    50
}

fn default_permutations() -> usize {
    51
}

fn default_p_floor() -> f64 {
    DEFAULT_P_FLOOR
}

impl TestSpec {
    pub fn sharded(num_shards: usize, num_permutations: usize) -> Self {
        Self {
            test_kind: TestKind::Sharded,
            num_shards,
            num_permutations,
            p_floor: DEFAULT_P_FLOOR,
        }
    }

    pub fn permutation(num_permutations: usize) -> Self {
        Self {
            test_kind: TestKind::Permutation,
            num_shards: 1,
            num_permutations,
            p_floor: DEFAULT_P_FLOOR,
        }
    }

    pub fn with_seed(&self, master_seed: u64) -> TestConfig {
        TestConfig {
            test_kind: self.test_kind,
            num_shards: match self.test_kind {
                TestKind::Sharded => self.num_shards,
                TestKind::Permutation => 1,
            },
            num_permutations: self.num_permutations,
            master_seed,
            p_floor: self.p_floor,
        }
    }

    /// Checks that the test can run on a dataset of `n` examples.
    pub fn admissible(&self, n: usize) -> Result<(), String> {
        self.with_seed(0).validate()?;
        let need = match self.test_kind {
            TestKind::Sharded => 2 * self.num_shards,
            TestKind::Permutation => 2,
        };
        if n < need {
            return Err(format!(
                "{} test with {} shards needs at least {need} examples, dataset has {n}",
                self.test_kind, self.num_shards
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Skipped,
    Error,
}

pub(crate) const TAG_BACKGROUND: u64 = 1;
pub(crate) const TAG_DATASET: u64 = 2;
pub(crate) const TAG_INJECTION: u64 = 3;
pub(crate) const TAG_TEST: u64 = 4;

/// A stable 64-bit label for a name, used as a seed-derivation path element.
pub(crate) fn label(name: &str) -> u64 {
    let digest = Sha256::digest(name.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// SHA-256 of the config's compact JSON form.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let json = serde_json::to_vec(config).expect("configs serialize");
    hex::encode(Sha256::digest(&json))
}

pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

pub(crate) fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub(crate) fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
