use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::BssRole;
use crate::mac::BondingMode;
use crate::metrics::{mean_std, DelayHistogram};
use crate::traffic::TrafficKind;

/// Bumped whenever a serialized field changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub schema: u32,
    pub scenario: String,
    pub method: String,
    pub bonding: BondingMode,
    pub seed: u64,
    pub trial: u32,
    pub duration_s: f64,
    pub burn_in_s: f64,
    pub events: u64,
    /// Over post-burn-in goodputs; absent for single-BSS runs or all-zero input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jain: Option<f64>,
    /// Under-loaded BSS per interval, when a schedule is present.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub underloaded: Vec<usize>,
    pub bss: Vec<BssResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BssResult {
    pub index: usize,
    pub role: BssRole,
    /// Fixed allocation label, if the BSS did not learn in this run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<u8>,
    pub traffic: TrafficKind,
    /// Offered load at the start of the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offered_mbps: Option<f64>,
    /// Post-burn-in goodput.
    pub goodput_mbps: f64,
    /// Goodput over the whole run, learning phase included.
    pub goodput_full_mbps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<DelaySummary>,
    pub acked_packets: u64,
    pub retry_drops: u64,
    pub overflow_drops: u64,
    pub cycles: CycleCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<Selection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intervals: Vec<IntervalResult>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelaySummary {
    pub mean_ms: f64,
    pub p25_ms: f64,
    pub p50_ms: f64,
    pub p75_ms: f64,
}

impl DelaySummary {
    pub fn from_histogram(h: &DelayHistogram) -> Option<Self> {
        Some(DelaySummary {
            mean_ms: h.mean_ms()?,
            p25_ms: h.quantile_ms(25.0)?,
            p50_ms: h.quantile_ms(50.0)?,
            p75_ms: h.quantile_ms(75.0)?,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCounts {
    pub success: u64,
    pub failure: u64,
    pub aborted: u64,
}

/// Post-burn-in selection statistics of a learning BSS.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub decisions: u64,
    /// Share per operational channel label.
    pub channel: BTreeMap<u8, f64>,
    /// Share per contention window.
    pub cw: BTreeMap<u32, f64>,
    /// Most frequent (channel, CW) pair.
    pub top_pair: PairShare,
    /// Most frequent full action.
    pub top_action: ActionShare,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairShare {
    pub channel: u8,
    pub cw: u32,
    pub share: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionShare {
    pub channel: u8,
    pub primary: u8,
    pub cw: u32,
    pub share: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalResult {
    pub index: usize,
    pub start_s: f64,
    pub end_s: f64,
    pub goodput_mbps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<DelaySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offered_mbps: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub channel: BTreeMap<u8, f64>,
}

/// Cross-trial aggregate for one scenario and method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema: u32,
    pub scenario: String,
    pub method: String,
    pub trials: usize,
    pub bss: Vec<BssSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jain_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jain_std: Option<f64>,
    /// Mean over trials of the summed post-burn-in goodput.
    pub total_goodput_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BssSummary {
    pub index: usize,
    pub goodput_mean: f64,
    pub goodput_std: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay_p50_mean: Option<f64>,
}

/// Mean and spread across trials. All trials must share scenario and method.
pub fn summarize(results: &[TrialResult]) -> Option<Summary> {
    let first = results.first()?;
    let n_bss = first.bss.len();
    let bss = (0..n_bss)
        .map(|i| {
            let g: Vec<f64> = results.iter().map(|r| r.bss[i].goodput_mbps).collect();
            let (goodput_mean, goodput_std) = mean_std(&g);
            let d: Vec<f64> = results
                .iter()
                .filter_map(|r| r.bss[i].delay.map(|d| d.p50_ms))
                .collect();
            BssSummary {
                index: i,
                goodput_mean,
                goodput_std,
                delay_p50_mean: (!d.is_empty()).then(|| mean_std(&d).0),
            }
        })
        .collect();
    let jains: Vec<f64> = results.iter().filter_map(|r| r.jain).collect();
    let (jain_mean, jain_std) = if jains.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_std(&jains);
        (Some(m), Some(s))
    };
    let totals: Vec<f64> = results
        .iter()
        .map(|r| r.bss.iter().map(|b| b.goodput_mbps).sum())
        .collect();
    Some(Summary {
        schema: SCHEMA_VERSION,
        scenario: first.scenario.clone(),
        method: first.method.clone(),
        trials: results.len(),
        bss,
        jain_mean,
        jain_std,
        total_goodput_mean: mean_std(&totals).0,
    })
}
