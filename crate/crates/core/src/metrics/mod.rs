//! Goodput, delay and fairness statistics.

mod delay;

pub use delay::DelayHistogram;

use std::collections::BTreeMap;

use crate::engine::SimTime;
use crate::mac::{DecisionRecord, GoodputSample};

/// Time-weighted mean of a piecewise-constant signal. Each point `(t, v)`
/// holds `v` over `(t_prev, t]`, the first point starting at zero.
pub fn time_weighted_mean(points: &[(SimTime, f64)], start: SimTime, end: SimTime) -> f64 {
    if end <= start {
        return 0.0;
    }
    let mut prev = SimTime::ZERO;
    let mut acc = 0.0;
    for &(t, v) in points {
        let lo = prev.max(start);
        let hi = t.min(end);
        if hi > lo {
            acc += v * (hi - lo).as_nanos() as f64;
        }
        prev = t;
        if prev >= end {
            break;
        }
    }
    acc / (end - start).as_nanos() as f64
}

/// Goodput in Mbit/s over `[start, end]`. A sample's rate is its bits over
/// the time since the previous sample, held over that span.
pub fn time_weighted_goodput(samples: &[GoodputSample], start: SimTime, end: SimTime) -> f64 {
    if end <= start {
        return 0.0;
    }
    let mut prev = SimTime::ZERO;
    let mut bits = 0.0;
    for s in samples {
        let span = s.time.saturating_sub(prev);
        let lo = prev.max(start);
        let hi = s.time.min(end);
        if hi > lo && span > SimTime::ZERO {
            bits += s.bits as f64 * (hi - lo).as_nanos() as f64 / span.as_nanos() as f64;
        }
        prev = s.time;
        if prev >= end {
            break;
        }
    }
    bits / (end - start).as_secs_f64() / 1e6
}

/// Jain's index. `None` for empty or all-zero input.
pub fn jain_fairness(values: &[f64]) -> Option<f64> {
    let n = values.len() as f64;
    let sum: f64 = values.iter().sum();
    let sq: f64 = values.iter().map(|v| v * v).sum();
    (sq > 0.0).then(|| sum * sum / (n * sq))
}

/// Nearest-rank percentile of sorted data.
pub fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil().max(1.0) as usize;
    Some(sorted[rank.min(sorted.len()) - 1])
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Share of decisions in `[start, end)` falling on each key.
pub fn selection_frequencies<K: Ord>(
    log: &[DecisionRecord],
    start: SimTime,
    end: SimTime,
    key: impl Fn(&DecisionRecord) -> K,
) -> BTreeMap<K, f64> {
    let mut counts: BTreeMap<K, f64> = BTreeMap::new();
    let mut total = 0.0;
    for d in log.iter().filter(|d| d.time >= start && d.time < end) {
        *counts.entry(key(d)).or_default() += 1.0;
        total += 1.0;
    }
    counts.values_mut().for_each(|c| *c /= total);
    counts
}

/// Goodput and delay quartiles inside one window.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowStats {
    pub start: SimTime,
    pub end: SimTime,
    pub goodput_mbps: f64,
    pub delay: DelayHistogram,
}

/// Splits `[0, count·length)` into consecutive windows, each clipped to start
/// no earlier than `skip`. `delays` must be segmented at the same boundaries.
pub fn interval_stats(
    samples: &[GoodputSample],
    delays: &[DelayHistogram],
    boundaries: &[SimTime],
    windows: &[(SimTime, SimTime)],
) -> Vec<WindowStats> {
    windows
        .iter()
        .map(|&(start, end)| {
            let mut delay = DelayHistogram::new();
            for (i, h) in delays.iter().enumerate() {
                let seg_start = if i == 0 {
                    SimTime::ZERO
                } else {
                    boundaries[i - 1]
                };
                let seg_end = boundaries.get(i).copied().unwrap_or(SimTime::MAX);
                if seg_start >= start && seg_end <= end {
                    delay.merge(h);
                }
            }
            WindowStats {
                start,
                end,
                goodput_mbps: time_weighted_goodput(samples, start, end),
                delay,
            }
        })
        .collect()
}
