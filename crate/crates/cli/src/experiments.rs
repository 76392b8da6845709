use std::path::PathBuf;

use clap::Args;
use ordertest::dataset::load_dataset;
use ordertest::harness::{
    run_canary_experiment, run_null_calibration, sensitivity_sweep, CalibrationConfig, CanaryExperimentConfig,
    HarnessError, SweepConfig, TestSpec,
};
use ordertest::ngram::synthetic::synthetic_dataset;
use ordertest::ngram::{save_model, train as train_model, CorpusSource, NGramConfig, DEFAULT_ALPHA, DEFAULT_ORDER};
use ordertest::oracle::{open_oracle, OracleSpec, RemoteConfig};
use ordertest::stats::TestKind;

use crate::{usage, write_output, CliError};

#[derive(Debug, Args)]
pub(crate) struct TrainArgs {
    /// `synthetic:seed=N,docs=M` or a text file of blank-line separated
    /// documents.
    #[arg(long)]
    corpus: CorpusSource,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Additive smoothing constant.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

pub(crate) fn train(args: TrainArgs, jobs: usize) -> Result<(), CliError> {
    println!(
        "ngram train: corpus={} order={} alpha={} jobs={jobs} out={}",
        args.corpus,
        args.order,
        args.alpha,
        args.out.display()
    );
    let config = NGramConfig {
        order: args.order,
        alpha: args.alpha,
    };
    ordertest::ngram::NGramModel::empty(config).map_err(usage)?;
    let docs = args.corpus.load().map_err(|e| usage(format!("{}: {e}", args.corpus)))?;
    let model = train_model(&docs, config).map_err(usage)?;
    save_model(&model, &args.out).map_err(usage)?;
    println!(
        "trained on {} documents: {} contexts, {} n-grams",
        docs.len(),
        model.num_contexts(),
        model.num_grams()
    );
    println!("model hash: {}", model.content_hash());
    println!("wrote {}", args.out.display());
    Ok(())
}

#[derive(Debug, Args)]
pub(crate) struct CanaryRunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Report directory [default: the config's `output_dir`].
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn harness_error(e: HarnessError) -> CliError {
    match e {
        HarnessError::Oracle(e) => CliError::Oracle(e.to_string()),
        other => usage(other),
    }
}

pub(crate) fn canary_run(args: CanaryRunArgs, jobs: usize) -> Result<(), CliError> {
    let mut config = CanaryExperimentConfig::from_file(&args.config).map_err(usage)?;
    if let Some(dir) = args.out_dir {
        config.output_dir = Some(dir);
    }
    let dir = config
        .output_dir
        .clone()
        .ok_or_else(|| usage("no output directory: set `output_dir` or pass --out-dir"))?;
    println!("canary run: jobs={jobs} config_hash={}", config.hash());
    print!("{}", config.to_json());

    let report = run_canary_experiment(&config).map_err(harness_error)?;
    let written = report.write(&dir).map_err(usage)?;

    println!("{:<28} {:>5} {:>6} {:>16}", "test", "dup", "runs", "median log10 p");
    for d in &report.summary.by_duplication {
        let m = d.median_log10_p.map_or("-".into(), |m| format!("{m:.3}"));
        println!("{:<28} {:>5} {:>6} {:>16}", d.test, d.duplication, d.runs, m);
    }
    for c in &report.summary.controls {
        let m = c.median_p.map_or("-".into(), |m| format!("{m:.3}"));
        println!("control {} / {}: median p {m} over {} runs", c.dataset, c.test, c.runs);
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    match report.failed_rows() {
        0 => Ok(()),
        n => Err(CliError::Partial(format!("{n} of {} rows failed; see rows.csv", report.rows.len()))),
    }
}

#[derive(Debug, Args)]
pub(crate) struct CalibrateArgs {
    /// Training corpus for the clean model.
    #[arg(long, default_value = "synthetic:seed=0,docs=50000")]
    corpus: CorpusSource,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Fresh datasets to test; at least 100.
    #[arg(long, default_value_t = 200)]
    runs: usize,
    /// Examples per dataset.
    #[arg(long, default_value_t = 200)]
    dataset_size: usize,
    /// `sharded` or `permutation`.
    #[arg(long, default_value_t = TestKind::Sharded)]
    test: TestKind,
    #[arg(long, default_value_t = 50)]
    shards: usize,
    #[arg(long, default_value_t = 51)]
    permutations: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Calibration report JSON.
    #[arg(long)]
    out: PathBuf,
}

pub(crate) fn calibrate(args: CalibrateArgs, jobs: usize) -> Result<(), CliError> {
    let test = match args.test {
        TestKind::Sharded => TestSpec::sharded(args.shards, args.permutations),
        TestKind::Permutation => TestSpec::permutation(args.permutations),
    };
    let config = CalibrationConfig {
        background: args.corpus,
        ngram: NGramConfig {
            order: args.order,
            alpha: args.alpha,
        },
        runs: args.runs,
        dataset_size: args.dataset_size,
        test,
        seed: args.seed,
    };
    println!(
        "calibrate: corpus={} order={} alpha={} runs={} dataset_size={} test={} shards={} permutations={} seed={} jobs={jobs} out={}",
        config.background,
        args.order,
        args.alpha,
        args.runs,
        args.dataset_size,
        args.test,
        test.with_seed(0).num_shards,
        args.permutations,
        args.seed,
        args.out.display()
    );
    let report = run_null_calibration(&config).map_err(harness_error)?;
    write_output(&args.out, &report.to_json())?;
    println!("model hash: {}", report.model_hash);
    println!(
        "KS D = {:.4} over {} p-values (5% critical value ≈ {:.4})",
        report.ks_statistic,
        report.p_values.len(),
        1.36 / (report.p_values.len() as f64).sqrt()
    );
    for f in &report.fractions_below {
        println!("fraction(p < {}) = {:.3}", f.alpha, f.fraction);
    }
    println!("wrote {}", args.out.display());
    match report.failures.len() {
        0 => Ok(()),
        n => Err(CliError::Partial(format!("{n} of {} runs failed", config.runs))),
    }
}

#[derive(Debug, Args)]
pub(crate) struct SweepArgs {
    /// Sweep config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Report directory.
    #[arg(long)]
    out_dir: PathBuf,
}

pub(crate) fn sweep(args: SweepArgs, jobs: usize) -> Result<(), CliError> {
    let config = SweepConfig::from_file(&args.config).map_err(usage)?;
    config.validate().map_err(usage)?;
    println!("sweep: jobs={jobs} out_dir={}", args.out_dir.display());
    println!("{}", serde_json::to_string_pretty(&config).map_err(usage)?);

    let datasets = config
        .datasets
        .iter()
        .map(|p| load_dataset(p, config.max_examples))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let spec = match (&config.model, &config.oracle) {
        (Some(path), _) => OracleSpec::NGram(path.clone()),
        (None, Some(s)) => s.parse().map_err(usage)?,
        (None, None) => unreachable!("validated"),
    };
    let oracle = open_oracle(&spec, &RemoteConfig::default()).map_err(|e| CliError::Oracle(e.to_string()))?;
    let report = sensitivity_sweep(&config, &datasets, oracle.as_ref()).map_err(harness_error)?;

    write_output(&args.out_dir.join("sweep.json"), &report.to_json())?;
    write_output(&args.out_dir.join("points.csv"), &report.points_csv())?;
    write_output(&args.out_dir.join("rows.csv"), &report.rows_csv())?;
    for row in report.rows.iter().filter(|r| !r.reason.is_empty()) {
        println!("{} {} on {} seed {}: {}", report.axis, row.value, row.dataset, row.seed, row.reason);
    }
    println!("{:>8} {:>6} {:>16}", report.axis, "runs", "mean log10 p");
    for p in &report.points {
        let m = p.mean_log10_p.map_or("-".into(), |m| format!("{m:.3}"));
        let mark = if Some(p.value) == report.argmin { "  <- lowest" } else { "" };
        println!("{:>8} {:>6} {:>16}{mark}", p.value, p.runs, m);
    }
    println!("wrote {}", args.out_dir.display());
    match report.failed_rows() {
        0 => Ok(()),
        n => Err(CliError::Partial(format!("{n} of {} rows failed", report.rows.len()))),
    }
}

#[derive(Debug, Args)]
pub(crate) struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    examples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Dataset name recorded in results [default: the output file stem].
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

pub(crate) fn synth(args: SynthArgs) -> Result<(), CliError> {
    let name = args.name.clone().unwrap_or_else(|| {
        args.out
            .file_stem()
            .map_or("synthetic".into(), |s| s.to_string_lossy().into_owned())
    });
    println!(
        "synth: examples={} seed={} name={name} out={}",
        args.examples,
        args.seed,
        args.out.display()
    );
    let ds = synthetic_dataset(name, args.seed, args.examples).map_err(usage)?;
    write_output(&args.out, &ds.to_jsonl())?;
    println!("wrote {} examples to {}", ds.len(), args.out.display());
    Ok(())
}
