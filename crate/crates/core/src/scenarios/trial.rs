use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::results::{
    ActionShare, BssResult, CycleCounts, DelaySummary, IntervalResult, PairShare, Selection,
    TrialResult, SCHEMA_VERSION,
};
use super::{hearing_matrix, place, BssRole, Method, ScenarioError, ScenarioSpec, TrafficConfig};
use crate::agents::LearningAgent;
use crate::engine::{Purpose, RngStream, SimTime, StreamId};
use crate::mac::{
    DcfConfig, DecisionRecord, LoadChange, Network, NetworkOptions, NodeSetup, Policy, TraceLine,
};
use crate::metrics::{interval_stats, jain_fairness, selection_frequencies, time_weighted_goodput};
use crate::phy::{ChannelId, OperationalChannel};
use crate::traffic::{apply_interval_schedule, draw_underloaded, TrafficKind, TrafficModel};

/// Node index reserved for the interval-schedule stream.
const SCHEDULE_NODE: u32 = u32::MAX - 2;

/// How independent trials are farmed out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    /// Rayon workers when the `parallel` feature is on, otherwise sequential.
    #[default]
    Parallel,
    Sequential,
}

/// A ready-to-run network plus what the result record needs to know about it.
pub struct TrialSetup {
    pub network: Network,
    pub kinds: Vec<TrafficKind>,
    /// Offered rate per BSS and interval, in bit/s; one entry when unscheduled.
    pub offered_bps: Vec<Vec<Option<f64>>>,
    pub underloaded: Vec<usize>,
    pub delay_boundaries: Vec<SimTime>,
}

pub struct TrialOutput {
    pub result: TrialResult,
    /// Learning rounds per BSS, empty for static BSSs.
    pub decisions: Vec<Vec<DecisionRecord>>,
    pub trace: Vec<TraceLine>,
}

fn policy_for(
    spec: &ScenarioSpec,
    i: usize,
    method: &Method,
) -> Result<(Policy, Option<u8>), ScenarioError> {
    let b = &spec.bss[i];
    let fixed = |label: u8, primary: Option<u8>| -> Result<_, ScenarioError> {
        let channel = OperationalChannel::from_label(label)?;
        let primary = match primary {
            Some(p) => ChannelId::new(p)?,
            None => channel.lowest(),
        };
        DcfConfig {
            primary,
            ..DcfConfig::legacy(channel, spec.bonding)
        }
        .validate()?;
        Ok((Policy::Static { channel, primary }, Some(label)))
    };
    match (b.role, method) {
        (BssRole::Legacy, _) => fixed(b.channel.expect("validated"), None),
        (BssRole::Learning, Method::Static { channel, primary }) => fixed(*channel, *primary),
        (
            BssRole::Learning,
            Method::Learning {
                algorithm,
                architecture,
                alpha,
            },
        ) => {
            let a = alpha.unwrap_or_else(|| algorithm.default_alpha(*architecture));
            if !(a > 0.0 && a.is_finite()) {
                return Err(ScenarioError::Invalid(format!(
                    "alpha must be positive, got {a}"
                )));
            }
            Ok((
                Policy::Learning(LearningAgent::new(*algorithm, *architecture, a)),
                None,
            ))
        }
    }
}

fn delay_boundaries(spec: &ScenarioSpec) -> Vec<SimTime> {
    let end = SimTime::from_secs_f64(spec.duration_s);
    let mut cuts = vec![SimTime::from_secs_f64(spec.burn_in_s)];
    if let Some(s) = &spec.intervals {
        cuts.extend((1..s.count).map(|k| s.boundary(k)));
    }
    cuts.retain(|&t| t > SimTime::ZERO && t < end);
    cuts.sort();
    cuts.dedup();
    cuts
}

/// Builds trial `trial` of `spec` driven by `method`. Positions depend on
/// `seed` only; traffic draws and every simulation stream on `(seed, trial)`.
pub fn instantiate(
    spec: &ScenarioSpec,
    method: &Method,
    seed: u64,
    trial: u32,
    trace: bool,
) -> Result<TrialSetup, ScenarioError> {
    spec.validate()?;
    let placements = place(spec, seed)?;
    let hears = hearing_matrix(&placements)?;
    let end = SimTime::from_secs_f64(spec.duration_s);

    let mut kinds = Vec::with_capacity(spec.bss.len());
    let mut fractions = Vec::with_capacity(spec.bss.len());
    for (i, b) in spec.bss.iter().enumerate() {
        let mut rng = RngStream::new(seed, StreamId::new(trial, i as u32, Purpose::Schedule));
        let kind = match b.traffic {
            TrafficConfig::FullBuffer => TrafficKind::FullBuffer,
            TrafficConfig::Poisson { .. } => TrafficKind::Poisson,
            TrafficConfig::Bursty { .. } => TrafficKind::Bursty,
            TrafficConfig::Vr { .. } => TrafficKind::Vr,
            TrafficConfig::Random { .. } => TrafficKind::VARIABLE[rng.below(3) as usize],
        };
        let fraction = b.traffic.load().map(|[lo, hi]| rng.uniform_in(lo, hi));
        kinds.push(kind);
        fractions.push(fraction);
    }

    let model = |i: usize,
                 fraction: Option<f64>|
     -> Result<(TrafficModel, Option<f64>), ScenarioError> {
        match fraction {
            None => Ok((TrafficModel::FullBuffer, None)),
            Some(f) => {
                let rate = f * crate::traffic::reference_goodput(spec.bss[i].reference_width()?);
                Ok((TrafficModel::from_rate(kinds[i], rate), Some(rate)))
            }
        }
    };

    let members: Vec<usize> = (0..spec.bss.len())
        .filter(|&i| spec.bss[i].scheduled)
        .collect();
    let mut offered: Vec<Vec<Option<f64>>> = Vec::with_capacity(spec.bss.len());
    let mut initial = Vec::with_capacity(spec.bss.len());
    for (i, &f) in fractions.iter().enumerate() {
        let (m, rate) = model(i, f)?;
        initial.push(m);
        offered.push(vec![rate]);
    }

    let mut underloaded = Vec::new();
    let mut load_changes = Vec::new();
    if let (Some(schedule), false) = (&spec.intervals, members.is_empty()) {
        let mut rng = RngStream::new(seed, StreamId::new(trial, SCHEDULE_NODE, Purpose::Schedule));
        let picks = draw_underloaded(members.len(), schedule.count, &mut rng);
        underloaded = picks.iter().map(|&m| members[m]).collect();
        for k in 0..schedule.count {
            let loads = apply_interval_schedule(schedule, &picks, members.len(), k, &mut rng);
            let mut updates = Vec::with_capacity(members.len());
            for (&i, &f) in members.iter().zip(&loads) {
                let (m, rate) = model(i, Some(f))?;
                if k == 0 {
                    initial[i] = m;
                    offered[i][0] = rate;
                } else {
                    offered[i].push(rate);
                    updates.push((i, m));
                }
            }
            let at = schedule.boundary(k);
            if k > 0 && at < end {
                load_changes.push(LoadChange { at, updates });
            }
        }
        // Unscheduled BSSs keep one rate for the whole run.
        for (i, o) in offered.iter_mut().enumerate() {
            if !spec.bss[i].scheduled {
                *o = vec![o[0]; schedule.count];
            }
        }
    }

    let mut setups = Vec::with_capacity(spec.bss.len());
    for (i, (p, traffic)) in placements.iter().zip(initial).enumerate() {
        let (policy, _) = policy_for(spec, i, method)?;
        setups.push(NodeSetup {
            policy,
            traffic,
            mcs: p.link_mcs()?,
        });
    }

    let boundaries = delay_boundaries(spec);
    let mut opts = NetworkOptions::new(spec.bonding, seed, trial);
    opts.delay_boundaries = boundaries.clone();
    opts.load_changes = load_changes;
    opts.trace = trace;
    Ok(TrialSetup {
        network: Network::new(setups, hears, opts),
        kinds,
        offered_bps: offered,
        underloaded,
        delay_boundaries: boundaries,
    })
}

fn top<K: Copy>(shares: &BTreeMap<K, f64>) -> Option<(K, f64)> {
    // Strict comparison keeps the smallest key among ties.
    shares.iter().fold(None, |best, (&k, &v)| match best {
        Some((_, bv)) if bv >= v => best,
        _ => Some((k, v)),
    })
}

fn selection(log: &[DecisionRecord], start: SimTime, end: SimTime) -> Option<Selection> {
    let decisions = log
        .iter()
        .filter(|d| d.time >= start && d.time < end)
        .count() as u64;
    if decisions == 0 {
        return None;
    }
    let channel = selection_frequencies(log, start, end, |d| d.action.channel.label());
    let cw = selection_frequencies(log, start, end, |d| d.action.cw);
    let pairs = selection_frequencies(log, start, end, |d| (d.action.channel.label(), d.action.cw));
    let actions = selection_frequencies(log, start, end, |d| {
        (
            d.action.channel.label(),
            d.action.primary.index(),
            d.action.cw,
        )
    });
    let ((pc, pcw), ps) = top(&pairs)?;
    let ((ac, ap, acw), as_) = top(&actions)?;
    Some(Selection {
        decisions,
        channel,
        cw,
        top_pair: PairShare {
            channel: pc,
            cw: pcw,
            share: ps,
        },
        top_action: ActionShare {
            channel: ac,
            primary: ap,
            cw: acw,
            share: as_,
        },
    })
}

/// Runs one trial to completion and condenses it into a result record.
pub fn run_trial(
    spec: &ScenarioSpec,
    method: &Method,
    seed: u64,
    trial: u32,
    trace: bool,
) -> Result<TrialOutput, ScenarioError> {
    let TrialSetup {
        mut network,
        kinds,
        offered_bps,
        underloaded,
        delay_boundaries,
    } = instantiate(spec, method, seed, trial, trace)?;
    let end = SimTime::from_secs_f64(spec.duration_s);
    let burn_in = SimTime::from_secs_f64(spec.burn_in_s);
    network.run_until(end);
    let events = network.events_executed();
    let (stats, trace_lines) = network.into_parts();

    let windows: Vec<(usize, SimTime, SimTime)> = match &spec.intervals {
        Some(s) => (0..s.count)
            .filter_map(|k| {
                let lo = s.boundary(k).max(burn_in);
                let hi = if k + 1 == s.count {
                    end
                } else {
                    s.boundary(k + 1).min(end)
                };
                (lo < hi).then_some((k, lo, hi))
            })
            .collect(),
        None => Vec::new(),
    };

    let mut bss = Vec::with_capacity(stats.len());
    let mut decisions = Vec::with_capacity(stats.len());
    for (i, mut st) in stats.into_iter().enumerate() {
        let (_, channel) = policy_for(spec, i, method)?;
        let post = interval_stats(
            &st.goodput,
            &st.delays,
            &delay_boundaries,
            &[(burn_in, SimTime::MAX)],
        );
        let learning = channel.is_none();
        let intervals = interval_stats(
            &st.goodput,
            &st.delays,
            &delay_boundaries,
            &windows
                .iter()
                .map(|&(_, lo, hi)| (lo, hi))
                .collect::<Vec<_>>(),
        )
        .into_iter()
        .zip(&windows)
        .map(|(w, &(k, lo, hi))| IntervalResult {
            index: k,
            start_s: lo.as_secs_f64(),
            end_s: hi.as_secs_f64(),
            goodput_mbps: w.goodput_mbps,
            delay: DelaySummary::from_histogram(&w.delay),
            offered_mbps: offered_bps[i].get(k).copied().flatten().map(|r| r / 1e6),
            channel: if learning {
                selection_frequencies(&st.decisions, lo, hi, |d| d.action.channel.label())
            } else {
                BTreeMap::new()
            },
        })
        .collect();
        bss.push(BssResult {
            index: i,
            role: spec.bss[i].role,
            channel,
            traffic: kinds[i],
            offered_mbps: offered_bps[i][0].map(|r| r / 1e6),
            goodput_mbps: time_weighted_goodput(&st.goodput, burn_in, end),
            goodput_full_mbps: time_weighted_goodput(&st.goodput, SimTime::ZERO, end),
            delay: DelaySummary::from_histogram(&post[0].delay),
            acked_packets: st.acked_packets,
            retry_drops: st.retry_drops,
            overflow_drops: st.overflow_drops,
            cycles: CycleCounts {
                success: st.successes,
                failure: st.failures,
                aborted: st.aborts,
            },
            selection: if learning {
                selection(&st.decisions, burn_in, end)
            } else {
                None
            },
            intervals,
        });
        decisions.push(std::mem::take(&mut st.decisions));
    }

    let goodputs: Vec<f64> = bss.iter().map(|b| b.goodput_mbps).collect();
    let result = TrialResult {
        schema: SCHEMA_VERSION,
        scenario: spec.name.clone(),
        method: method.label(),
        bonding: spec.bonding,
        seed,
        trial,
        duration_s: spec.duration_s,
        burn_in_s: spec.burn_in_s,
        events,
        jain: if goodputs.len() > 1 {
            jain_fairness(&goodputs)
        } else {
            None
        },
        underloaded,
        bss,
    };
    Ok(TrialOutput {
        result,
        decisions,
        trace: trace_lines,
    })
}

/// Runs trials `0..trials`. Output order follows the trial index whatever
/// the execution mode, and each trial depends only on `(seed, trial)`.
pub fn run_trials(
    spec: &ScenarioSpec,
    method: &Method,
    seed: u64,
    trials: u32,
    trace: bool,
    execution: Execution,
) -> Result<Vec<TrialOutput>, ScenarioError> {
    let one = |t: u32| run_trial(spec, method, seed, t, trace);
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..trials).into_par_iter().map(one).collect(),
        _ => (0..trials).map(one).collect(),
    }
}
