//! Result files on disk and the flat tables exported from them.

mod export;

pub use export::{export, representative, ExportReport, Statistic};

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::scenarios::{summarize, TrialOutput, TrialResult};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("no trial records under {0}")]
    NoResults(PathBuf),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Directory holding one scenario/method run.
pub fn run_dir(root: &Path, scenario: &str, method: &str) -> PathBuf {
    root.join(scenario).join(method)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WriteOptions {
    pub decisions: bool,
    pub trace: bool,
}

#[derive(Serialize)]
struct DecisionRow {
    bss: usize,
    time_s: f64,
    duration_ms: f64,
    channel: u8,
    primary: u8,
    cw: u32,
    reward: f64,
    context_hash: String,
    outcome: crate::mac::Outcome,
}

fn write_text(path: &Path, text: &str) -> Result<(), ReportError> {
    fs::write(path, text).map_err(io_err(path))
}

/// One JSON record per line.
pub fn to_jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Writes `trial-NNN.jsonl` per trial and `summary.jsonl`, plus decision
/// logs and event traces when asked. Returns the files written.
pub fn write_run(
    dir: &Path,
    outputs: &[TrialOutput],
    opts: WriteOptions,
) -> Result<Vec<PathBuf>, ReportError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    for out in outputs {
        let t = out.result.trial;
        let path = dir.join(format!("trial-{t:03}.jsonl"));
        write_text(&path, &to_jsonl(std::slice::from_ref(&out.result)))?;
        written.push(path);

        if opts.decisions {
            let path = dir.join(format!("decisions-{t:03}.csv"));
            let mut w = csv::Writer::from_path(&path)?;
            for (bss, log) in out.decisions.iter().enumerate() {
                for d in log {
                    w.serialize(DecisionRow {
                        bss,
                        time_s: d.time.as_secs_f64(),
                        duration_ms: d.duration_ms,
                        channel: d.action.channel.label(),
                        primary: d.action.primary.index(),
                        cw: d.action.cw,
                        reward: d.reward,
                        context_hash: format!("{:016x}", d.context_hash),
                        outcome: d.outcome,
                    })?;
                }
            }
            w.flush().map_err(io_err(&path))?;
            written.push(path);
        }
        if opts.trace {
            let path = dir.join(format!("trace-{t:03}.log"));
            let file = fs::File::create(&path).map_err(io_err(&path))?;
            let mut w = BufWriter::new(file);
            for line in &out.trace {
                writeln!(w, "{line}").map_err(io_err(&path))?;
            }
            w.flush().map_err(io_err(&path))?;
            written.push(path);
        }
    }
    let results: Vec<TrialResult> = outputs.iter().map(|o| o.result.clone()).collect();
    if let Some(summary) = summarize(&results) {
        let path = dir.join("summary.jsonl");
        write_text(&path, &to_jsonl(&[summary]))?;
        written.push(path);
    }
    Ok(written)
}

fn collect_trial_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), ReportError> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io_err(dir))?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_trial_files(&p, out)?;
        } else if p
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("trial-") && n.ends_with(".jsonl"))
        {
            out.push(p);
        }
    }
    Ok(())
}

/// Every trial record below `root`, in path order.
pub fn read_results(root: &Path) -> Result<Vec<TrialResult>, ReportError> {
    let mut files = Vec::new();
    collect_trial_files(root, &mut files)?;
    let mut results = Vec::new();
    for path in files {
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let r: TrialResult = serde_json::from_str(line).map_err(|e| ReportError::Parse {
                path: path.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
            results.push(r);
        }
    }
    if results.is_empty() {
        return Err(ReportError::NoResults(root.to_path_buf()));
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{mp1, run_trials, Execution, Method};

    #[test]
    fn write_then_read_back() {
        let dir = std::env::temp_dir().join(format!("wifimab-report-{}", std::process::id()));
        let mut spec = mp1();
        spec.duration_s = 0.2;
        spec.burn_in_s = 0.05;
        let outs = run_trials(&spec, &Method::fixed(3), 1, 2, true, Execution::Sequential).unwrap();
        let run = run_dir(&dir, &spec.name, "static-3");
        let files = write_run(
            &run,
            &outs,
            WriteOptions {
                decisions: true,
                trace: true,
            },
        )
        .unwrap();
        assert_eq!(files.len(), 7);
        let back = read_results(&dir).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1], outs[1].result);
        let trace = fs::read_to_string(run.join("trace-000.log")).unwrap();
        assert!(trace.lines().count() > 10);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = std::env::temp_dir().join(format!("wifimab-empty-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        assert!(matches!(read_results(&dir), Err(ReportError::NoResults(_))));
        fs::remove_dir_all(&dir).unwrap();
    }
}
