use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use wifimab::metrics::mean_std;
use wifimab::report::{self, ReportError, Statistic, WriteOptions};
use wifimab::scenarios::{
    build_scenario, describe, instantiate, run_trials, summarize, tune as tune_alpha, Execution,
    Method, ScenarioSpec, TrialResult, TuneConfig, SCENARIO_NAMES,
};

use crate::{ExportArgs, RunArgs, TuneArgs};

/// Exit code 1 for anything the user can fix in the invocation or config,
/// 2 when a run that was accepted fails.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

fn config(e: impl fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn runtime(e: impl fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// A fully resolved `run` invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub spec: ScenarioSpec,
    pub method: Method,
    pub seed: u64,
    pub trials: u32,
    pub out: PathBuf,
    pub decision_log: bool,
    pub trace: bool,
    pub execution: Execution,
}

fn load_scenario(arg: &str, seed: u64) -> Result<ScenarioSpec, Failure> {
    let path = Path::new(arg);
    if path.extension().is_some_and(|e| e == "toml") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| config(format!("{arg}: {e}")))?;
        return ScenarioSpec::from_toml(&text).map_err(|e| config(format!("{arg}: {e}")));
    }
    build_scenario(arg, seed).map_err(config)
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, Failure> {
        let mut spec = load_scenario(&args.scenario, args.seed)?;
        if let Some(b) = args.bonding {
            spec.bonding = b;
        }
        if let Some(d) = args.duration {
            spec.duration_s = d;
        }
        let trials = args.trials.unwrap_or(spec.trials);
        if trials == 0 {
            return Err(config("--trials must be at least 1"));
        }
        spec.validate().map_err(config)?;

        let method = match args.algo.algorithm() {
            Some(algorithm) => {
                if args.channel.is_some() {
                    return Err(config("--channel only applies to --algo none"));
                }
                if let Some(a) = args.alpha {
                    if !(a > 0.0 && a.is_finite()) {
                        return Err(config(format!("--alpha must be positive, got {a}")));
                    }
                }
                Method::Learning {
                    algorithm,
                    architecture: args.arch,
                    alpha: args.alpha,
                }
            }
            None => {
                if args.alpha.is_some() {
                    log::warn!("--alpha has no effect with --algo none");
                }
                Method::Static {
                    channel: args.channel.unwrap_or(spec.baseline_channel),
                    primary: args.primary,
                }
            }
        };
        // Catches bad allocations and unplaceable layouts before any trial runs.
        instantiate(&spec, &method, args.seed, 0, false).map_err(config)?;

        let static_run = matches!(method, Method::Static { .. });
        if static_run && args.decision_log {
            log::warn!("no learning rounds to log with --algo none");
        }
        Ok(RunConfig {
            spec,
            method,
            seed: args.seed,
            trials,
            out: args.out.clone(),
            decision_log: args.decision_log && !static_run,
            trace: args.trace,
            execution: execution(args.sequential),
        })
    }
}

pub fn run(args: &RunArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(args)?;
    let label = cfg.method.label();
    log::info!(
        "{} / {label}: {} trials of {} s, seed {}",
        cfg.spec.name,
        cfg.trials,
        cfg.spec.duration_s,
        cfg.seed
    );
    let outputs = run_trials(
        &cfg.spec,
        &cfg.method,
        cfg.seed,
        cfg.trials,
        cfg.trace,
        cfg.execution,
    )
    .map_err(runtime)?;
    let dir = report::run_dir(&cfg.out, &cfg.spec.name, &label);
    let files = report::write_run(
        &dir,
        &outputs,
        WriteOptions {
            decisions: cfg.decision_log,
            trace: cfg.trace,
        },
    )
    .map_err(runtime)?;
    log::info!("wrote {} files to {}", files.len(), dir.display());

    let results: Vec<TrialResult> = outputs.into_iter().map(|o| o.result).collect();
    if let Some(s) = summarize(&results) {
        println!(
            "{} {} ({} trials) -> {}",
            s.scenario,
            s.method,
            s.trials,
            dir.display()
        );
        for b in &s.bss {
            println!(
                "  bss {}: goodput {:.1} +/- {:.1} Mbps",
                b.index, b.goodput_mean, b.goodput_std
            );
        }
        if let (Some(m), Some(sd)) = (s.jain_mean, s.jain_std) {
            println!("  jain {m:.3} +/- {sd:.3}");
        }
    }
    Ok(())
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn tune(args: &TuneArgs) -> Result<(), Failure> {
    let mut cfg = TuneConfig::new(args.algo, args.arch, args.seed);
    cfg.candidates = args.candidates;
    if let Some(r) = &args.range {
        cfg.range = (r[0], r[1]);
    }
    if let Some(c) = &args.bss_counts {
        if c.contains(&0) {
            return Err(config("deployments need at least one BSS"));
        }
        cfg.bss_counts = c.clone();
    }
    if let Some(d) = &args.durations {
        if d.iter().any(|&s| !(s > 0.0)) {
            return Err(config("durations must be positive"));
        }
        cfg.durations_s = d.clone();
    }
    cfg.validate().map_err(config)?;

    let rows = tune_alpha(&cfg, execution(args.sequential)).map_err(runtime)?;
    let dir = args.out.join("tune");
    fs::create_dir_all(&dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{}-{}-leaderboard.csv", args.arch, args.algo));
    let mut w = csv::Writer::from_path(&path).map_err(runtime)?;
    w.write_record(["rank", "alpha", "mean_reward"])
        .map_err(runtime)?;
    for r in &rows {
        w.write_record([
            r.rank.to_string(),
            r.alpha.to_string(),
            r.mean_reward.to_string(),
        ])
        .map_err(runtime)?;
    }
    w.flush().map_err(runtime)?;
    log::info!("leaderboard written to {}", path.display());
    let best = &rows[0];
    println!(
        "best alpha {:.4} (mean reward {:.4})",
        best.alpha, best.mean_reward
    );
    Ok(())
}

pub fn export(args: &ExportArgs) -> Result<(), Failure> {
    let results = report::read_results(&args.results).map_err(|e| match e {
        ReportError::NoResults(_) | ReportError::Io { .. } => config(e),
        other => runtime(other),
    })?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| args.results.join("tables"));
    let rep = report::export(&results, &out).map_err(runtime)?;
    println!(
        "{} rows in {} files under {}",
        rep.rows,
        rep.files.len(),
        out.display()
    );
    if let Some(stat) = args.representative {
        write_representatives(&results, stat, &out)?;
    }
    Ok(())
}

fn write_representatives(
    results: &[TrialResult],
    stat: Statistic,
    out: &Path,
) -> Result<(), Failure> {
    let mut groups: BTreeMap<(&str, &str), Vec<TrialResult>> = BTreeMap::new();
    for r in results {
        groups
            .entry((&r.scenario, &r.method))
            .or_default()
            .push(r.clone());
    }
    let path = out.join(format!("representative-{stat}.csv"));
    let mut w = csv::Writer::from_path(&path).map_err(runtime)?;
    w.write_record([
        "scenario",
        "method",
        "trial",
        "statistic",
        "value",
        "trial_mean",
        "trial_std",
    ])
    .map_err(runtime)?;
    for ((scenario, method), runs) in &groups {
        let Some(best) = report::representative(runs, stat) else {
            continue;
        };
        let values: Vec<f64> = runs.iter().filter_map(|r| stat.value(r)).collect();
        let (mean, std) = mean_std(&values);
        let value = stat.value(best).unwrap_or(f64::NAN);
        println!(
            "{scenario} {method}: trial {} has {stat} {value:.3} (mean {mean:.3})",
            best.trial
        );
        w.write_record([
            scenario.to_string(),
            method.to_string(),
            best.trial.to_string(),
            stat.to_string(),
            value.to_string(),
            mean.to_string(),
            std.to_string(),
        ])
        .map_err(runtime)?;
    }
    w.flush().map_err(runtime)?;
    Ok(())
}

pub fn list_scenarios() {
    for name in SCENARIO_NAMES {
        println!("{name:<18} {}", describe(name).unwrap_or(""));
    }
}
