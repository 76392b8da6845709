use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{load_dataset, ExampleDataset};
use crate::ngram::synthetic::synthetic_dataset;
use crate::ngram::{build_contaminated_corpus, train, CanaryPlan, CanarySpec, CorpusSource, NGramConfig};
use crate::oracle::NGramOracle;
use crate::rng::derive_seed;
use crate::stats::{run_test, RunOptions, TestKind, RESULT_SCHEMA_VERSION, TOOL_VERSION};

use super::{
    config_hash, label, median, plot, read_json, to_pretty_json, write_file, HarnessError, RowStatus, TestSpec,
    TAG_BACKGROUND, TAG_DATASET, TAG_INJECTION, TAG_TEST,
};

fn default_examples() -> usize {
    200
}

fn default_plot() -> bool {
    true
}

/// A dataset to inject. Without `path` a fresh synthetic dataset of
/// `examples` sentences is drawn for every seed; with `path` the file is
/// used as is, capped at `examples`. A duplication of 0 means the dataset is
/// tested but never injected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanaryDef {
    pub name: String,
    pub duplication: usize,
    #[serde(default = "default_examples")]
    pub examples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// The held-out negative control: same distribution, never injected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlDef {
    pub name: String,
    #[serde(default = "default_examples")]
    pub examples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

fn default_control() -> Option<ControlDef> {
    Some(ControlDef {
        name: "control".into(),
        examples: default_examples(),
        path: None,
    })
}

fn default_tests() -> Vec<TestSpec> {
    vec![TestSpec::sharded(50, 51), TestSpec::permutation(51)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanaryExperimentConfig {
    /// `synthetic:seed=N,docs=M` or a text file of blank-line separated
    /// documents. A synthetic background is redrawn for every run seed.
    pub background: CorpusSource,
    #[serde(default)]
    pub ngram: NGramConfig,
    pub canaries: Vec<CanaryDef>,
    #[serde(default = "default_control")]
    pub control: Option<ControlDef>,
    #[serde(default = "default_tests")]
    pub tests: Vec<TestSpec>,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_plot")]
    pub plot: bool,
}

impl CanaryExperimentConfig {
    /// Six synthetic canaries duplicated {1, 2, 4, 7, 10, 50} times in a
    /// 50k-document background, five seeds, both tests.
    pub fn desk_scale() -> Self {
        Self {
            background: CorpusSource::Synthetic { seed: 0, docs: 50_000 },
            ngram: NGramConfig::default(),
            canaries: [1, 2, 4, 7, 10, 50]
                .into_iter()
                .map(|d| CanaryDef {
                    name: format!("canary-dup{d}"),
                    duplication: d,
                    examples: default_examples(),
                    path: None,
                })
                .collect(),
            control: default_control(),
            tests: default_tests(),
            seeds: vec![1, 2, 3, 4, 5],
            output_dir: None,
            plot: true,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        read_json(path)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.canaries.is_empty() {
            return bad("at least one canary is required".into());
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.tests.is_empty() {
            return bad("at least one test is required".into());
        }
        let mut names: Vec<&str> = self.canaries.iter().map(|c| c.name.as_str()).collect();
        names.extend(self.control.iter().map(|c| c.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("dataset name `{}` is used twice", w[0]));
        }
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();
        if seeds.windows(2).any(|w| w[0] == w[1]) {
            return bad("seeds must be distinct".into());
        }
        for test in &self.tests {
            test.with_seed(0).validate().map_err(HarnessError::Config)?;
        }
        crate::ngram::NGramModel::empty(self.ngram)?;
        Ok(())
    }

    /// The hash recorded in every row. The output location does not affect
    /// results and is left out.
    pub fn hash(&self) -> String {
        config_hash(&Self {
            output_dir: None,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> String {
        to_pretty_json(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Canary,
    Control,
}

/// One test run on one dataset under one seed, with everything needed to
/// reproduce it on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub seed: u64,
    pub dataset: String,
    pub role: Role,
    pub duplication: usize,
    pub examples: usize,
    pub test: String,
    pub test_kind: TestKind,
    pub num_shards: usize,
    pub num_permutations: usize,
    pub master_seed: u64,
    /// Absent for datasets read from a file.
    pub dataset_seed: Option<u64>,
    pub injection_seed: u64,
    pub background: String,
    pub p_value: Option<f64>,
    pub log10_p: Option<f64>,
    pub status: RowStatus,
    pub error: String,
    pub config_hash: String,
    pub model_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DupSummary {
    pub test: String,
    pub duplication: usize,
    pub runs: usize,
    pub failed: usize,
    pub median_log10_p: Option<f64>,
    pub median_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSummary {
    pub test: String,
    pub dataset: String,
    pub runs: usize,
    pub failed: usize,
    pub median_p: Option<f64>,
    pub fraction_below_0_05: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanarySummary {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub by_duplication: Vec<DupSummary>,
    pub controls: Vec<ControlSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanaryReport {
    pub config: CanaryExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    pub summary: CanarySummary,
}

impl CanaryReport {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Error).count()
    }

    /// Writes `rows.csv`, `summary.json`, `config.json` and, if enabled,
    /// `power.svg` into `dir`. The saved config omits the output directory,
    /// so reports written to different places are identical.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
        let mut written = Vec::new();
        let mut put = |name: &str, contents: String| -> Result<(), HarnessError> {
            let path = dir.join(name);
            write_file(&path, &contents)?;
            written.push(path);
            Ok(())
        };
        let config = CanaryExperimentConfig {
            output_dir: None,
            ..self.config.clone()
        };
        put("config.json", config.to_json())?;
        put("rows.csv", write_rows_csv(&self.rows))?;
        put("summary.json", to_pretty_json(&self.summary))?;
        if self.config.plot {
            put("power.svg", plot::power_plot_svg(&self.summary))?;
        }
        Ok(written)
    }
}

pub(crate) fn test_label(spec: &TestSpec) -> String {
    match spec.test_kind {
        TestKind::Sharded => format!("sharded:r={},m={}", spec.num_shards, spec.num_permutations),
        TestKind::Permutation => format!("permutation:m={}", spec.num_permutations),
    }
}

struct Member<'a> {
    name: &'a str,
    role: Role,
    duplication: usize,
    examples: usize,
    file: Option<&'a ExampleDataset>,
}

struct Resolved {
    dataset: ExampleDataset,
    role: Role,
    duplication: usize,
    dataset_seed: Option<u64>,
}

fn effective_background(source: &CorpusSource, run_seed: u64) -> CorpusSource {
    match source {
        CorpusSource::Synthetic { seed, docs } => CorpusSource::Synthetic {
            seed: derive_seed(*seed, &[TAG_BACKGROUND, run_seed]),
            docs: *docs,
        },
        other => other.clone(),
    }
}

/// Builds a contaminated corpus per seed, trains an n-gram model on it and
/// runs every configured test on every canary and on the control.
///
/// A failure in one row, or in training for one seed, is recorded in the
/// affected rows and the rest of the experiment carries on.
pub fn run_canary_experiment(config: &CanaryExperimentConfig) -> Result<CanaryReport, HarnessError> {
    config.validate()?;
    let hash = config.hash();

    let files: BTreeMap<&str, ExampleDataset> = config
        .canaries
        .iter()
        .map(|c| (c.name.as_str(), c.path.as_ref(), c.examples))
        .chain(config.control.iter().map(|c| (c.name.as_str(), c.path.as_ref(), c.examples)))
        .filter_map(|(name, path, cap)| path.map(|p| (name, p, cap)))
        .map(|(name, path, cap)| Ok((name, load_dataset(path, Some(cap))?)))
        .collect::<Result<_, HarnessError>>()?;

    let mut members: Vec<Member> = config
        .canaries
        .iter()
        .map(|c| Member {
            name: &c.name,
            role: Role::Canary,
            duplication: c.duplication,
            examples: c.examples,
            file: files.get(c.name.as_str()),
        })
        .collect();
    members.extend(config.control.iter().map(|c| Member {
        name: &c.name,
        role: Role::Control,
        duplication: 0,
        examples: c.examples,
        file: files.get(c.name.as_str()),
    }));

    let rows: Vec<Vec<ExperimentRow>> = config
        .seeds
        .par_iter()
        .map(|&seed| run_seed(config, &hash, &members, seed))
        .collect();
    let rows: Vec<ExperimentRow> = rows.into_iter().flatten().collect();
    let summary = summarize_rows(&rows);
    Ok(CanaryReport {
        config: config.clone(),
        rows,
        summary,
    })
}

fn run_seed(config: &CanaryExperimentConfig, hash: &str, members: &[Member], seed: u64) -> Vec<ExperimentRow> {
    let background = effective_background(&config.background, seed);
    let injection_seed = derive_seed(seed, &[TAG_INJECTION]);

    let resolved: Result<Vec<Resolved>, String> = members
        .iter()
        .map(|m| match m.file {
            Some(ds) => Ok(Resolved {
                dataset: ds.clone(),
                role: m.role,
                duplication: m.duplication,
                dataset_seed: None,
            }),
            None => {
                let ds_seed = derive_seed(seed, &[TAG_DATASET, label(m.name)]);
                synthetic_dataset(m.name, ds_seed, m.examples)
                    .map(|dataset| Resolved {
                        dataset,
                        role: m.role,
                        duplication: m.duplication,
                        dataset_seed: Some(ds_seed),
                    })
                    .map_err(|e| e.to_string())
            }
        })
        .collect();

    let trained = resolved.and_then(|resolved| {
        let docs = background.load().map_err(|e| format!("background {background}: {e}"))?;
        let plan = CanaryPlan {
            background: docs,
            canaries: resolved
                .iter()
                .filter(|r| r.role == Role::Canary && r.duplication > 0)
                .map(|r| CanarySpec {
                    dataset: r.dataset.clone(),
                    duplication: r.duplication,
                })
                .collect(),
            injection_seed,
        };
        let corpus = build_contaminated_corpus(&plan).map_err(|e| e.to_string())?;
        drop(plan);
        let model = train(&corpus, config.ngram).map_err(|e| e.to_string())?;
        Ok((resolved, model))
    });

    let jobs: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|d| (0..config.tests.len()).map(move |t| (d, t)))
        .collect();

    let base_row = |m: &Member, spec: &TestSpec, t: usize| ExperimentRow {
        seed,
        dataset: m.name.to_string(),
        role: m.role,
        duplication: m.duplication,
        examples: m.file.map_or(m.examples, |f| f.len()),
        test: test_label(spec),
        test_kind: spec.test_kind,
        num_shards: spec.with_seed(0).num_shards,
        num_permutations: spec.num_permutations,
        master_seed: derive_seed(seed, &[TAG_TEST, label(m.name), t as u64]),
        dataset_seed: None,
        injection_seed,
        background: background.to_string(),
        p_value: None,
        log10_p: None,
        status: RowStatus::Error,
        error: String::new(),
        config_hash: hash.to_string(),
        model_hash: String::new(),
    };

    let (resolved, model) = match trained {
        Ok(ok) => ok,
        Err(message) => {
            return jobs
                .iter()
                .map(|&(d, t)| ExperimentRow {
                    error: message.clone(),
                    ..base_row(&members[d], &config.tests[t], t)
                })
                .collect()
        }
    };
    let model_hash = model.content_hash();
    let oracle = NGramOracle::new(format!("ngram:{model_hash}"), Arc::new(model));

    jobs.par_iter()
        .map(|&(d, t)| {
            let spec = &config.tests[t];
            let r = &resolved[d];
            let mut row = ExperimentRow {
                examples: r.dataset.len(),
                dataset_seed: r.dataset_seed,
                model_hash: model_hash.clone(),
                ..base_row(&members[d], spec, t)
            };
            if let Err(reason) = spec.admissible(r.dataset.len()) {
                row.status = RowStatus::Skipped;
                row.error = reason;
                return row;
            }
            match run_test(&r.dataset, &oracle, &spec.with_seed(row.master_seed), &RunOptions::default()) {
                Ok(result) => {
                    row.p_value = Some(result.p_value);
                    row.log10_p = Some(result.p_value.log10());
                    row.status = RowStatus::Ok;
                }
                Err(e) => row.error = e.to_string(),
            }
            row
        })
        .collect()
}

/// Median log10 p per (test, duplication) for canaries, and per (test,
/// dataset) for controls. Groups are listed in first-appearance order.
pub fn summarize_rows(rows: &[ExperimentRow]) -> CanarySummary {
    let mut canary: Vec<((String, usize), Vec<&ExperimentRow>)> = Vec::new();
    let mut control: Vec<((String, String), Vec<&ExperimentRow>)> = Vec::new();
    for row in rows {
        match row.role {
            Role::Canary => push_group(&mut canary, (row.test.clone(), row.duplication), row),
            Role::Control => push_group(&mut control, (row.test.clone(), row.dataset.clone()), row),
        }
    }
    canary.sort_by(|a, b| (&a.0 .0, a.0 .1).cmp(&(&b.0 .0, b.0 .1)));

    let p_values = |group: &[&ExperimentRow]| -> Vec<f64> { group.iter().filter_map(|r| r.p_value).collect() };
    let failed = |group: &[&ExperimentRow]| group.iter().filter(|r| r.status != RowStatus::Ok).count();

    CanarySummary {
        schema_version: RESULT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        config_hash: rows.first().map(|r| r.config_hash.clone()).unwrap_or_default(),
        by_duplication: canary
            .iter()
            .map(|((test, dup), group)| {
                let ps = p_values(group);
                let logs: Vec<f64> = group.iter().filter_map(|r| r.log10_p).collect();
                DupSummary {
                    test: test.clone(),
                    duplication: *dup,
                    runs: ps.len(),
                    failed: failed(group),
                    median_log10_p: median(&logs),
                    median_p: median(&ps),
                }
            })
            .collect(),
        controls: control
            .iter()
            .map(|((test, dataset), group)| {
                let ps = p_values(group);
                ControlSummary {
                    test: test.clone(),
                    dataset: dataset.clone(),
                    runs: ps.len(),
                    failed: failed(group),
                    median_p: median(&ps),
                    fraction_below_0_05: (!ps.is_empty())
                        .then(|| ps.iter().filter(|&&p| p < 0.05).count() as f64 / ps.len() as f64),
                }
            })
            .collect(),
    }
}

fn push_group<'a, K: PartialEq>(groups: &mut Vec<(K, Vec<&'a ExperimentRow>)>, key: K, row: &'a ExperimentRow) {
    match groups.iter_mut().find(|(k, _)| *k == key) {
        Some((_, g)) => g.push(row),
        None => groups.push((key, vec![row])),
    }
}

pub fn write_rows_csv(rows: &[ExperimentRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("rows serialize");
    }
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn read_rows_csv(path: &Path) -> Result<Vec<ExperimentRow>, HarnessError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| HarnessError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e: csv::Error| HarnessError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
}
