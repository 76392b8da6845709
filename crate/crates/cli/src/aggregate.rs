use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use ordertest::stats::{
    ecdf, filtered_aggregate, fisher_combine_named, Component, ControlSet, StatsError, TestResult, DEFAULT_P_FLOOR,
};

use crate::{usage, write_output, CliError};

#[derive(Debug, Args)]
pub(crate) struct AggregateArgs {
    /// Glob of TestResult files for the model under audit.
    #[arg(long)]
    target: String,
    /// `[NAME=]GLOB` of TestResult files from a negative-control model.
    /// Repeatable. NAME defaults to the oracle recorded in the files.
    #[arg(long)]
    control: Vec<String>,
    /// A dataset is dropped if any control's p-value is below this.
    #[arg(long, default_value_t = 0.05)]
    threshold: f64,
    /// AggregateResult JSON output.
    #[arg(long)]
    out: PathBuf,
    /// ECDF of the included p-values [default: <out> with extension .ecdf.csv].
    #[arg(long)]
    ecdf: Option<PathBuf>,
}

struct ResultSet {
    oracle: String,
    p_values: BTreeMap<String, f64>,
}

fn read_set(pattern: &str) -> Result<ResultSet, CliError> {
    let paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| usage(format!("bad glob `{pattern}`: {e}")))?
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    if paths.is_empty() {
        return Err(usage(format!("no files match `{pattern}`")));
    }
    let mut p_values = BTreeMap::new();
    let mut oracle = String::new();
    for path in &paths {
        let result = read_result(path)?;
        if oracle.is_empty() {
            oracle = result.oracle.clone();
        }
        if p_values.insert(result.dataset.clone(), result.p_value).is_some() {
            return Err(usage(format!(
                "dataset `{}` appears twice in `{pattern}` (again in {})",
                result.dataset,
                path.display()
            )));
        }
    }
    Ok(ResultSet { oracle, p_values })
}

fn read_result(path: &Path) -> Result<TestResult, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    TestResult::from_json(&text).map_err(|e| usage(format!("{}: not a test result: {e}", path.display())))
}

fn default_ecdf_path(out: &Path) -> PathBuf {
    out.with_extension("ecdf.csv")
}

pub(crate) fn run(args: AggregateArgs) -> Result<(), CliError> {
    let ecdf_path = args.ecdf.clone().unwrap_or_else(|| default_ecdf_path(&args.out));
    println!(
        "aggregate: target={} controls=[{}] threshold={} p_floor={:e} out={} ecdf={}",
        args.target,
        args.control.join(", "),
        args.threshold,
        DEFAULT_P_FLOOR,
        args.out.display(),
        ecdf_path.display()
    );

    let target = read_set(&args.target)?;
    let controls = args
        .control
        .iter()
        .map(|spec| {
            let (name, pattern) = match spec.split_once('=') {
                Some((n, g)) if !n.is_empty() && !n.contains(['*', '?', '[', '/']) => (Some(n), g),
                _ => (None, spec.as_str()),
            };
            let set = read_set(pattern)?;
            Ok(ControlSet {
                name: name.map_or(set.oracle, str::to_string),
                p_values: set.p_values,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let result = if controls.is_empty() {
        let components = target
            .p_values
            .iter()
            .map(|(name, &p)| Component {
                name: name.clone(),
                p_value: p,
            })
            .collect();
        fisher_combine_named(components, DEFAULT_P_FLOOR)
    } else {
        filtered_aggregate(&target.p_values, &controls, args.threshold)
    };
    let result = result.map_err(|e| match e {
        StatsError::AllExcluded => CliError::Partial(e.to_string()),
        other => usage(other),
    })?;

    write_output(&args.out, &result.to_json())?;
    let curve = ecdf(&result.included_p_values()).map_err(usage)?;
    write_output(&ecdf_path, &curve.to_csv())?;

    for ex in &result.excluded {
        println!("excluded {}: {}", ex.name, ex.reason);
    }
    println!(
        "combined {} of {} datasets: X² = {:.4}, df = {}, p = {:e}",
        result.component_p_values.len(),
        target.p_values.len(),
        result.fisher_statistic,
        result.degrees_of_freedom,
        result.combined_p
    );
    println!("wrote {} and {}", args.out.display(), ecdf_path.display());
    Ok(())
}
