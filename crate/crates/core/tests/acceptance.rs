//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use common::reference::{CHI2_SF_TABLE, SHARDED_CASES, T_SF_TABLE};
use ordertest::dataset::ExampleDataset;
use ordertest::harness::{
    run_canary_experiment, run_null_calibration, sensitivity_sweep, CalibrationConfig, CanaryExperimentConfig,
    CanaryReport, Role, SweepAxis, SweepConfig, TestSpec,
};
use ordertest::ngram::synthetic::{background_documents, synthetic_dataset};
use ordertest::ngram::{build_contaminated_corpus, train, CanaryPlan, CanarySpec, CorpusSource, NGramConfig};
use ordertest::oracle::NGramOracle;
use ordertest::rng::{Domain, SeedStream};
use ordertest::stats::{
    chi2_sf, filtered_aggregate, fisher_combine, one_sided_t_test, permutation_p_value, permutation_test, run_test,
    t_sf, ControlSet, RunOptions, TestConfig, TestKind,
};

type Check = fn() -> Result<String, String>;

fn main() {
    let checks: [(u32, &str, Check); 9] = [
        (1, "permutation-test exactness", ac1_permutation_exactness),
        (2, "sharded-test arithmetic", ac2_sharded_arithmetic),
        (3, "special functions", ac3_special_functions),
        (4, "null calibration", ac4_null_calibration),
        (5, "power monotonicity", ac5_power_monotonicity),
        (6, "sharded beats permutation floor", ac6_sharded_beats_permutation),
        (7, "permutation sweep shape", ac7_permutation_sweep),
        (8, "fisher and control filtering", ac8_fisher_filtering),
        (9, "determinism across --jobs", ac9_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in checks {
        let tag = format!("AC{id}");
        if !filter.is_empty() && !filter.iter().any(|f| tag.eq_ignore_ascii_case(f)) {
            continue;
        }
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{tag} PASS  {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{tag} FAIL  {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn ac1_permutation_exactness() -> Result<String, String> {
    let started = Instant::now();
    let hand: [(f64, &[f64], usize); 4] = [
        (-10.0, &[-12.0, -11.0, -13.0], 0),
        (-10.0, &[-9.0, -11.0, -9.5, -10.0], 2),
        (0.0, &[1.0, 2.0, 3.0], 3),
        (-5.0, &[-5.0, -5.0], 0),
    ];
    for (canonical, permuted, exceed) in hand {
        let (e, p) = permutation_p_value(canonical, permuted);
        let expected = (exceed + 1) as f64 / (permuted.len() + 1) as f64;
        ensure(e == exceed && p == expected, || {
            format!("canonical {canonical} over {permuted:?}: got ({e}, {p}), want ({exceed}, {expected})")
        })?;
    }

    let m = 19;
    let mut rng = SeedStream::new(1, Domain::Derive, 0, 0);
    let mut min_p = f64::INFINITY;
    for _ in 0..1000 {
        let canonical = rng.unit();
        let permuted: Vec<f64> = (0..m).map(|_| rng.unit()).collect();
        let exceed = permuted.iter().filter(|&&l| canonical < l).count();
        let (e, p) = permutation_p_value(canonical, &permuted);
        ensure(e == exceed && p == (exceed + 1) as f64 / (m + 1) as f64, || format!("mismatch at exceed {exceed}"))?;
        min_p = min_p.min(p);
    }
    ensure(min_p == 1.0 / (m + 1) as f64, || format!("min p {min_p}, want {}", 1.0 / (m + 1) as f64))?;

    let ds = synthetic_dataset("ac1", 3, 30).map_err(|e| e.to_string())?;
    let model = train(&background_documents(1, 200), NGramConfig::default()).map_err(|e| e.to_string())?;
    let oracle = NGramOracle::new("ac1", Arc::new(model));
    let result = permutation_test(&ds, &oracle, m, 5).map_err(|e| e.to_string())?;
    let stats = result.permutation.as_ref().expect("permutation stats");
    let (e, p) = permutation_p_value(stats.canonical_logprob, &stats.permuted_logprobs);
    ensure(e == stats.exceed_count && p == result.p_value, || "end-to-end p disagrees with its scores".into())?;
    within(started.elapsed(), Duration::from_secs(1), "AC1")?;
    Ok(format!("4 hand-built cases exact; min p over 1000 cases = 1/{}", m + 1))
}

fn ac2_sharded_arithmetic() -> Result<String, String> {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for &(samples, t, df, p) in SHARDED_CASES {
        let out = one_sided_t_test(samples, 1e-38).map_err(|e| e.to_string())?;
        ensure(out.degrees_of_freedom == df, || format!("{samples:?}: df {}", out.degrees_of_freedom))?;
        let got_t = out.t_statistic.ok_or_else(|| format!("{samples:?}: no t"))?;
        ensure((got_t - t).abs() <= 1e-9 * t.abs().max(1.0), || format!("{samples:?}: t {got_t} vs {t}"))?;
        let dp = (out.p_value - p).abs();
        worst = worst.max(dp);
        ensure(dp <= 1e-9, || format!("{samples:?}: p {} vs {p}", out.p_value))?;
    }
    let zero = one_sided_t_test(&[-1.0, 0.0, 1.0], 1e-38).map_err(|e| e.to_string())?;
    ensure(zero.p_value == 0.5, || format!("t=0 gave p={}", zero.p_value))?;
    let ex = one_sided_t_test(&[1.0, 2.0, 3.0], 1e-38).map_err(|e| e.to_string())?;
    ensure((ex.p_value - 0.0371).abs() < 1e-4, || format!("[1,2,3] gave p={}", ex.p_value))?;
    ensure(SHARDED_CASES.len() >= 20, || "fewer than 20 pinned cases".into())?;
    within(started.elapsed(), Duration::from_secs(1), "AC2")?;
    Ok(format!("{} pinned cases, max |dp| = {worst:.2e}", SHARDED_CASES.len()))
}

fn ac3_special_functions() -> Result<String, String> {
    let started = Instant::now();
    let mut worst_t: f64 = 0.0;
    for &(t, df, p) in T_SF_TABLE {
        let err = (t_sf(t, df) - p).abs();
        worst_t = worst_t.max(err);
        ensure(err <= 1e-10, || format!("t_sf({t}, {df}) = {} vs {p}", t_sf(t, df)))?;
    }
    let mut worst_c: f64 = 0.0;
    for &(x, df, p) in CHI2_SF_TABLE {
        let err = (chi2_sf(x, df) - p).abs();
        worst_c = worst_c.max(err);
        ensure(err <= 1e-10, || format!("chi2_sf({x}, {df}) = {} vs {p}", chi2_sf(x, df)))?;
    }
    ensure(T_SF_TABLE.len() >= 20 && CHI2_SF_TABLE.len() >= 20, || "tables too short".into())?;
    within(started.elapsed(), Duration::from_secs(1), "AC3")?;
    Ok(format!(
        "t_sf {} points max err {worst_t:.1e}; chi2_sf {} points max err {worst_c:.1e}",
        T_SF_TABLE.len(),
        CHI2_SF_TABLE.len()
    ))
}

fn ac4_null_calibration() -> Result<String, String> {
    let config = CalibrationConfig {
        background: CorpusSource::Synthetic { seed: 0, docs: 50_000 },
        ngram: NGramConfig::default(),
        runs: 200,
        dataset_size: 200,
        test: TestSpec::sharded(50, 51),
        seed: 42,
    };
    let report = run_null_calibration(&config).map_err(|e| e.to_string())?;
    ensure(report.failures.is_empty(), || format!("{} runs failed", report.failures.len()))?;
    let frac = report.fraction_below(0.05).expect("alpha 0.05 reported");
    let detail = format!("KS D = {:.4} (< 0.0962), fraction(p<0.05) = {frac:.3} (in [0.02, 0.10])", report.ks_statistic);
    ensure(report.ks_statistic < 0.0962 && (0.02..=0.10).contains(&frac), || detail.clone())?;
    Ok(detail)
}

fn desk_scale_report() -> &'static Result<CanaryReport, String> {
    static REPORT: OnceLock<Result<CanaryReport, String>> = OnceLock::new();
    REPORT.get_or_init(|| run_canary_experiment(&CanaryExperimentConfig::desk_scale()).map_err(|e| e.to_string()))
}

fn median_p(report: &CanaryReport, kind: TestKind, dup: usize) -> Option<f64> {
    let mut ps: Vec<f64> = report
        .rows
        .iter()
        .filter(|r| r.role == Role::Canary && r.test_kind == kind && r.duplication == dup)
        .filter_map(|r| r.p_value)
        .collect();
    ps.sort_by(f64::total_cmp);
    let n = ps.len();
    (n > 0).then(|| if n % 2 == 1 { ps[n / 2] } else { (ps[n / 2 - 1] + ps[n / 2]) / 2.0 })
}

fn ac5_power_monotonicity() -> Result<String, String> {
    let report = desk_scale_report().as_ref().map_err(Clone::clone)?;
    ensure(report.failed_rows() == 0, || format!("{} rows failed", report.failed_rows()))?;
    let dups = [1, 2, 4, 7, 10, 50];
    let medians: Vec<f64> = dups
        .iter()
        .map(|&d| median_p(report, TestKind::Sharded, d).ok_or(format!("no sharded rows at dup {d}")))
        .collect::<Result<_, _>>()?;
    let shown = dups
        .iter()
        .zip(&medians)
        .map(|(d, p)| format!("{d}:{p:.2e}"))
        .collect::<Vec<_>>()
        .join(" ");
    ensure(medians.windows(2).all(|w| w[1] <= w[0]), || format!("median p not non-increasing: {shown}"))?;
    ensure(medians[4] <= 1e-4 && medians[5] <= 1e-4, || format!("median p above 1e-4 at dup >= 10: {shown}"))?;
    Ok(format!("median sharded p by dup {shown}"))
}

fn ac6_sharded_beats_permutation() -> Result<String, String> {
    let report = desk_scale_report().as_ref().map_err(Clone::clone)?;
    let sharded = median_p(report, TestKind::Sharded, 10).ok_or("no sharded rows at dup 10")?;
    let floor = 1.0 / 52.0;
    let perm = median_p(report, TestKind::Permutation, 10).ok_or("no permutation rows at dup 10")?;
    let detail = format!("dup 10: sharded median p {sharded:.2e}, permutation median p {perm:.4}, floor 1/52");
    ensure(sharded < floor, || detail.clone())?;
    Ok(detail)
}

/// Duplication count for the sweep: strong enough to detect, weak enough that
/// p stays off the floor so the curve has a shape.
const SWEEP_DUPLICATION: usize = 2;

fn ac7_permutation_sweep() -> Result<String, String> {
    let canaries: Vec<ExampleDataset> = (0..4)
        .map(|i| synthetic_dataset(format!("sweep-{i}"), 700 + i, 200))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let corpus = build_contaminated_corpus(&CanaryPlan {
        background: background_documents(77, 50_000),
        canaries: canaries
            .iter()
            .map(|d| CanarySpec {
                dataset: d.clone(),
                duplication: SWEEP_DUPLICATION,
            })
            .collect(),
        injection_seed: 78,
    })
    .map_err(|e| e.to_string())?;
    let model = train(&corpus, NGramConfig::default()).map_err(|e| e.to_string())?;
    let oracle = NGramOracle::new("sweep", Arc::new(model));
    let config = SweepConfig {
        axis: SweepAxis::Permutations,
        values: vec![1, 2, 10, 25, 50],
        fixed: 50,
        datasets: vec![],
        model: Some("in-memory".into()),
        oracle: None,
        seeds: (1..=10).collect(),
        max_examples: None,
    };
    let report = sensitivity_sweep(&config, &canaries, &oracle).map_err(|e| e.to_string())?;
    let means: Vec<f64> = report
        .points
        .iter()
        .map(|p| p.mean_log10_p.ok_or(format!("no runs at {}", p.value)))
        .collect::<Result<_, _>>()?;
    let shown = config
        .values
        .iter()
        .zip(&means)
        .map(|(v, m)| format!("{v}:{m:.2}"))
        .collect::<Vec<_>>()
        .join(" ");
    ensure(means.windows(2).all(|w| w[1] <= w[0]), || format!("mean log10 p not non-increasing: {shown}"))?;
    let early = means[0] - means[3];
    let late = means[3] - means[4];
    ensure(late < early, || format!("25->50 gain {late:.3} not below 1->25 gain {early:.3}: {shown}"))?;
    Ok(format!("mean log10 p by m {shown}; gain 1->25 {early:.2}, 25->50 {late:.2}"))
}

fn ac8_fisher_filtering() -> Result<String, String> {
    let pair = fisher_combine(&[0.05, 0.05]).map_err(|e| e.to_string())?;
    ensure((pair.combined_p - 0.01747).abs() <= 1e-4, || format!("fisher([0.05, 0.05]) = {}", pair.combined_p))?;

    let mut rng = SeedStream::new(57, Domain::Derive, 0, 0);
    let mut target = BTreeMap::new();
    let mut control_a = BTreeMap::new();
    let mut control_b = BTreeMap::new();
    for i in 0..57 {
        let name = format!("subject-{i:02}");
        target.insert(name.clone(), 0.01 + 0.98 * rng.unit());
        let flagged = i % 4 == 1 && i < 56;
        let (a, b) = match (flagged, i % 8 == 1) {
            (true, true) => (0.001 + 0.03 * rng.unit(), 0.2 + 0.8 * rng.unit()),
            (true, false) => (0.2 + 0.8 * rng.unit(), 0.04 * rng.unit() + 1e-4),
            (false, _) => (0.05 + 0.95 * rng.unit(), 0.05 + 0.95 * rng.unit()),
        };
        control_a.insert(name.clone(), a);
        control_b.insert(name, b);
    }
    let controls = [
        ControlSet {
            name: "control-a".into(),
            p_values: control_a,
        },
        ControlSet {
            name: "control-b".into(),
            p_values: control_b,
        },
    ];
    let result = filtered_aggregate(&target, &controls, 0.05).map_err(|e| e.to_string())?;
    ensure(result.excluded.len() == 14, || format!("{} excluded, want 14", result.excluded.len()))?;
    ensure(result.component_p_values.len() == 43, || {
        format!("{} included, want 43", result.component_p_values.len())
    })?;
    ensure(result.degrees_of_freedom == 86, || format!("df {}", result.degrees_of_freedom))?;
    let plain = fisher_combine(&result.included_p_values()).map_err(|e| e.to_string())?;
    ensure(plain.fisher_statistic == result.fisher_statistic && plain.combined_p == result.combined_p, || {
        "filtered result differs from combining the survivors directly".into()
    })?;
    ensure(
        result.excluded.iter().all(|e| e.flagged_by.len() == 1),
        || "each flagged file should name exactly one firing control".into(),
    )?;
    Ok(format!(
        "fisher([0.05,0.05]) = {:.5}; 57 files, 14 excluded, 43 combined: X2 = {:.2}, df 86, p = {:.4}",
        pair.combined_p, result.fisher_statistic, result.combined_p
    ))
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

fn ac9_determinism() -> Result<String, String> {
    let experiment = CanaryExperimentConfig {
        background: CorpusSource::Synthetic { seed: 9, docs: 3000 },
        seeds: vec![1, 2],
        ..CanaryExperimentConfig::desk_scale()
    };
    let run_experiment = || {
        let r = run_canary_experiment(&experiment).expect("experiment runs");
        (ordertest::harness::write_rows_csv(&r.rows), serde_json::to_string_pretty(&r.summary).unwrap())
    };
    let audit = || {
        let ds = synthetic_dataset("audit", 5, 400).unwrap();
        let model = train(&background_documents(8, 2000), NGramConfig::default()).unwrap();
        let oracle = NGramOracle::new("audit", Arc::new(model));
        let sharded = run_test(&ds, &oracle, &TestConfig::sharded(50, 50, 42), &RunOptions::default()).unwrap();
        let perm = run_test(&ds, &oracle, &TestConfig::permutation(100, 42), &RunOptions::default()).unwrap();
        sharded.to_json() + &perm.to_json()
    };
    let one = in_pool(1, || (run_experiment(), audit()));
    let eight = in_pool(8, || (run_experiment(), audit()));
    ensure(one.0 .0 == eight.0 .0, || "experiment rows differ between 1 and 8 jobs".into())?;
    ensure(one.0 .1 == eight.0 .1, || "experiment summaries differ between 1 and 8 jobs".into())?;
    ensure(one.1 == eight.1, || "audit results differ between 1 and 8 jobs".into())?;
    Ok(format!(
        "experiment CSV ({} bytes), summary and audit results byte-identical for 1 and 8 jobs",
        one.0 .0.len()
    ))
}
