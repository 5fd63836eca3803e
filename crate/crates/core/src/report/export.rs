use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{io_err, ReportError};
use crate::scenarios::{DelaySummary, TrialResult};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExportReport {
    pub files: Vec<PathBuf>,
    pub rows: usize,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn delay_cells(d: Option<DelaySummary>) -> [String; 4] {
    [
        opt(d.map(|d| d.mean_ms)),
        opt(d.map(|d| d.p25_ms)),
        opt(d.map(|d| d.p50_ms)),
        opt(d.map(|d| d.p75_ms)),
    ]
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
    rows: usize,
}

impl Table {
    fn create(path: PathBuf, header: &[&str]) -> Result<Self, ReportError> {
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record(header)?;
        Ok(Table {
            path,
            writer,
            rows: 0,
        })
    }

    fn row(&mut self, cells: &[String]) -> Result<(), ReportError> {
        self.rows += 1;
        Ok(self.writer.write_record(cells)?)
    }

    fn finish(mut self, report: &mut ExportReport) -> Result<(), ReportError> {
        self.writer.flush().map_err(io_err(&self.path))?;
        report.rows += self.rows;
        report.files.push(self.path);
        Ok(())
    }
}

/// Writes per-scenario tables into `out`: goodput/delay per BSS and trial
/// (with a Jain column for multi-BSS scenarios), per-interval statistics
/// where a schedule exists, and channel selection frequencies.
pub fn export(results: &[TrialResult], out: &Path) -> Result<ExportReport, ReportError> {
    fs::create_dir_all(out).map_err(io_err(out))?;
    let mut by_scenario: BTreeMap<&str, Vec<&TrialResult>> = BTreeMap::new();
    for r in results {
        by_scenario.entry(&r.scenario).or_default().push(r);
    }
    let mut report = ExportReport::default();
    for (scenario, runs) in by_scenario {
        let multi = runs.iter().any(|r| r.bss.len() > 1);
        let mut header = vec![
            "method",
            "trial",
            "bss",
            "role",
            "traffic",
            "goodput_mbps",
            "goodput_full_mbps",
            "delay_mean_ms",
            "delay_p25_ms",
            "delay_p50_ms",
            "delay_p75_ms",
            "retry_drops",
            "overflow_drops",
        ];
        if multi {
            header.push("jain");
        }
        let mut goodput = Table::create(out.join(format!("{scenario}-goodput.csv")), &header)?;
        let mut selection = Table::create(
            out.join(format!("{scenario}-selection.csv")),
            &["method", "trial", "bss", "scope", "channel", "share"],
        )?;
        let has_intervals = runs
            .iter()
            .any(|r| r.bss.iter().any(|b| !b.intervals.is_empty()));
        let mut intervals = if has_intervals {
            Some(Table::create(
                out.join(format!("{scenario}-intervals.csv")),
                &[
                    "method",
                    "trial",
                    "bss",
                    "interval",
                    "start_s",
                    "end_s",
                    "goodput_mbps",
                    "delay_p50_ms",
                    "offered_mbps",
                    "underloaded_bss",
                ],
            )?)
        } else {
            None
        };

        for r in runs {
            for b in &r.bss {
                let mut cells = vec![
                    r.method.clone(),
                    r.trial.to_string(),
                    b.index.to_string(),
                    format!("{:?}", b.role).to_lowercase(),
                    serde_json::to_value(b.traffic)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_owned))
                        .unwrap_or_default(),
                    b.goodput_mbps.to_string(),
                    b.goodput_full_mbps.to_string(),
                ];
                cells.extend(delay_cells(b.delay));
                cells.push(b.retry_drops.to_string());
                cells.push(b.overflow_drops.to_string());
                if multi {
                    cells.push(opt(r.jain));
                }
                goodput.row(&cells)?;

                if let Some(sel) = &b.selection {
                    for (ch, share) in &sel.channel {
                        selection.row(&[
                            r.method.clone(),
                            r.trial.to_string(),
                            b.index.to_string(),
                            "post-burn-in".into(),
                            ch.to_string(),
                            share.to_string(),
                        ])?;
                    }
                }
                for iv in &b.intervals {
                    for (ch, share) in &iv.channel {
                        selection.row(&[
                            r.method.clone(),
                            r.trial.to_string(),
                            b.index.to_string(),
                            format!("interval-{}", iv.index),
                            ch.to_string(),
                            share.to_string(),
                        ])?;
                    }
                    if let Some(t) = intervals.as_mut() {
                        t.row(&[
                            r.method.clone(),
                            r.trial.to_string(),
                            b.index.to_string(),
                            iv.index.to_string(),
                            iv.start_s.to_string(),
                            iv.end_s.to_string(),
                            iv.goodput_mbps.to_string(),
                            opt(iv.delay.map(|d| d.p50_ms)),
                            opt(iv.offered_mbps),
                            r.underloaded
                                .get(iv.index)
                                .map(|u| u.to_string())
                                .unwrap_or_default(),
                        ])?;
                    }
                }
            }
        }
        goodput.finish(&mut report)?;
        selection.finish(&mut report)?;
        if let Some(t) = intervals {
            t.finish(&mut report)?;
        }
    }
    Ok(report)
}

/// Statistic used to pick a representative trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    /// Post-burn-in goodput of the first BSS.
    Goodput,
    TotalGoodput,
    Jain,
}

impl FromStr for Statistic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "goodput" => Ok(Statistic::Goodput),
            "total-goodput" => Ok(Statistic::TotalGoodput),
            "jain" => Ok(Statistic::Jain),
            other => Err(format!(
                "unknown statistic '{other}' (goodput, total-goodput, jain)"
            )),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Goodput => "goodput",
            Statistic::TotalGoodput => "total-goodput",
            Statistic::Jain => "jain",
        })
    }
}

impl Statistic {
    pub fn value(self, r: &TrialResult) -> Option<f64> {
        match self {
            Statistic::Goodput => r.bss.first().map(|b| b.goodput_mbps),
            Statistic::TotalGoodput => Some(r.bss.iter().map(|b| b.goodput_mbps).sum()),
            Statistic::Jain => r.jain,
        }
    }
}

/// The trial maximizing `stat`; earliest trial on ties.
pub fn representative(results: &[TrialResult], stat: Statistic) -> Option<&TrialResult> {
    results
        .iter()
        .filter_map(|r| stat.value(r).map(|v| (r, v)))
        .fold(
            None,
            |best: Option<(&TrialResult, f64)>, (r, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((r, v)),
            },
        )
        .map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::jain_fairness;
    use crate::scenarios::{run_trials, sp1, Execution, Method};

    fn results() -> Vec<TrialResult> {
        let mut spec = sp1();
        spec.duration_s = 0.3;
        spec.burn_in_s = 0.1;
        let mut all = Vec::new();
        for m in [Method::fixed(2), Method::fixed(7)] {
            for o in run_trials(&spec, &m, 5, 2, false, Execution::Sequential).unwrap() {
                all.push(o.result);
            }
        }
        all
    }

    #[test]
    fn jain_column_is_recomputable() {
        let dir = std::env::temp_dir().join(format!("wifimab-export-{}", std::process::id()));
        let rs = results();
        let rep = export(&rs, &dir).unwrap();
        assert_eq!(rep.files.len(), 2);
        let mut rdr = csv::Reader::from_path(dir.join("sp1-goodput.csv")).unwrap();
        let headers = rdr.headers().unwrap().clone();
        let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
        let mut per_run: BTreeMap<(String, String), (Vec<f64>, f64)> = BTreeMap::new();
        for rec in rdr.records() {
            let rec = rec.unwrap();
            let e = per_run
                .entry((
                    rec[col("method")].to_string(),
                    rec[col("trial")].to_string(),
                ))
                .or_default();
            e.0.push(rec[col("goodput_mbps")].parse().unwrap());
            e.1 = rec[col("jain")].parse().unwrap();
        }
        // One row per (trial, method, BSS).
        assert_eq!(per_run.len(), 4);
        for (g, j) in per_run.values() {
            assert!((jain_fairness(g).unwrap() - j).abs() < 1e-12);
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn single_bss_has_no_jain_column() {
        let dir = std::env::temp_dir().join(format!("wifimab-export1-{}", std::process::id()));
        let mut rs = results();
        for r in &mut rs {
            r.bss.truncate(1);
            r.jain = None;
            r.scenario = "solo".into();
        }
        export(&rs, &dir).unwrap();
        let mut rdr = csv::Reader::from_path(dir.join("solo-goodput.csv")).unwrap();
        assert!(!rdr.headers().unwrap().iter().any(|h| h == "jain"));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn representative_picks_maximum() {
        let rs = results();
        let best = representative(&rs, Statistic::Goodput).unwrap();
        assert!(rs
            .iter()
            .all(|r| r.bss[0].goodput_mbps <= best.bss[0].goodput_mbps));
        assert_eq!(best.method, "static-2");
        assert!("nope".parse::<Statistic>().is_err());
    }
}
