use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ngram::synthetic::synthetic_dataset;
use crate::ngram::{train, CorpusSource, NGramConfig};
use crate::oracle::NGramOracle;
use crate::rng::derive_seed;
use crate::stats::{ks_statistic, run_test, RunOptions, RESULT_SCHEMA_VERSION, TOOL_VERSION};

use super::{config_hash, to_pretty_json, HarnessError, TestSpec, TAG_DATASET, TAG_TEST};

pub const CALIBRATION_ALPHAS: [f64; 3] = [0.01, 0.05, 0.1];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    pub background: CorpusSource,
    #[serde(default)]
    pub ngram: NGramConfig,
    pub runs: usize,
    pub dataset_size: usize,
    pub test: TestSpec,
    pub seed: u64,
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs < 100 {
            return Err(HarnessError::Config(format!(
                "calibration needs at least 100 runs, got {}",
                self.runs
            )));
        }
        self.test.admissible(self.dataset_size).map_err(HarnessError::Config)?;
        crate::ngram::NGramModel::empty(self.ngram)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaFraction {
    pub alpha: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: CalibrationConfig,
    pub config_hash: String,
    pub model_hash: String,
    pub ks_statistic: f64,
    pub fractions_below: Vec<AlphaFraction>,
    pub p_values: Vec<f64>,
    /// `(run index, message)` for runs that did not produce a p-value.
    pub failures: Vec<(usize, String)>,
}

impl CalibrationReport {
    pub fn to_json(&self) -> String {
        to_pretty_json(self)
    }

    pub fn fraction_below(&self, alpha: f64) -> Option<f64> {
        self.fractions_below.iter().find(|f| f.alpha == alpha).map(|f| f.fraction)
    }
}

/// Trains one clean model and tests it on `runs` fresh exchangeable
/// datasets. Under the null the p-values should look uniform.
pub fn run_null_calibration(config: &CalibrationConfig) -> Result<CalibrationReport, HarnessError> {
    config.validate()?;
    let docs = config.background.load().map_err(|e| {
        HarnessError::Config(format!("cannot load background {}: {e}", config.background))
    })?;
    let model = train(&docs, config.ngram)?;
    drop(docs);
    let model_hash = model.content_hash();
    let oracle = NGramOracle::new(format!("ngram:{model_hash}"), Arc::new(model));

    let outcomes: Vec<Result<f64, String>> = (0..config.runs)
        .into_par_iter()
        .map(|i| {
            let name = format!("null-{i}");
            let dataset = synthetic_dataset(&*name, derive_seed(config.seed, &[TAG_DATASET, i as u64]), config.dataset_size)
                .map_err(|e| e.to_string())?;
            let test = config.test.with_seed(derive_seed(config.seed, &[TAG_TEST, i as u64]));
            run_test(&dataset, &oracle, &test, &RunOptions::default())
                .map(|r| r.p_value)
                .map_err(|e| e.to_string())
        })
        .collect();

    let mut p_values = Vec::with_capacity(config.runs);
    let mut failures = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(p) => p_values.push(p),
            Err(e) => failures.push((i, e)),
        }
    }
    let ks = ks_statistic(&p_values)?;
    let n = p_values.len() as f64;
    Ok(CalibrationReport {
        schema_version: RESULT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        config: config.clone(),
        config_hash: config_hash(config),
        model_hash,
        ks_statistic: ks,
        fractions_below: CALIBRATION_ALPHAS
            .iter()
            .map(|&alpha| AlphaFraction {
                alpha,
                fraction: p_values.iter().filter(|&&p| p < alpha).count() as f64 / n,
            })
            .collect(),
        p_values,
        failures,
    })
}
