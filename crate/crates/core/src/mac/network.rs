//! Event-driven execution of every BSS's DCF over the shared spectrum.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    aggregate_ampdu, beb_update, dcb_transmit_set, scb_gate, Ampdu, BondDecision, BondingMode,
    CycleRecord, DcfConfig, Outcome, TxQueue, CW_MIN, PACKET_BYTES, RETRY_LIMIT,
};
use crate::agents::{compute_reward, Action, LearningAgent, Sensors, D_MAX_MS};
use crate::engine::{EventHandle, Purpose, RngStream, Scheduler, SimTime, StreamId};
use crate::metrics::DelayHistogram;
use crate::phy::{
    control_airtime, frame_airtime, ChannelId, ChannelSet, Mcs, OperationalChannel, PhyMode,
    SenseView, SpectrumState, TxId, Width, BLOCK_ACK_BYTES, CTS_BYTES, DIFS, NUM_BASIC_CHANNELS,
    PIFS, RTS_BYTES, SIFS, SLOT, SPATIAL_STREAMS,
};
use crate::traffic::{next_arrival, TrafficModel};

/// How a BSS picks its channel configuration.
pub enum Policy {
    /// Legacy DCF with BEB on a fixed allocation.
    Static {
        channel: OperationalChannel,
        primary: ChannelId,
    },
    /// A new action from the agent at the start of every cycle.
    Learning(LearningAgent),
}

impl Policy {
    /// Fixed allocation with the primary on its lowest channel.
    pub fn fixed(channel: OperationalChannel) -> Self {
        Policy::Static {
            channel,
            primary: channel.lowest(),
        }
    }
}

pub struct NodeSetup {
    pub policy: Policy,
    pub traffic: TrafficModel,
    pub mcs: Mcs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Arrival(usize),
    BackoffExpiry(usize),
    RtsEnd(usize),
    DataEnd(usize),
    ExchangeEnd(usize),
    Timeout(usize),
    CycleAbort(usize),
    IntervalBoundary(usize),
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Arrival(_) => "arrival",
            EventKind::BackoffExpiry(_) => "backoff-expiry",
            EventKind::RtsEnd(_) => "rts-end",
            EventKind::DataEnd(_) => "data-end",
            EventKind::ExchangeEnd(_) => "exchange-end",
            EventKind::Timeout(_) => "timeout",
            EventKind::CycleAbort(_) => "cycle-abort",
            EventKind::IntervalBoundary(_) => "interval-boundary",
        }
    }

    pub fn node(&self) -> Option<usize> {
        match *self {
            EventKind::Arrival(n)
            | EventKind::BackoffExpiry(n)
            | EventKind::RtsEnd(n)
            | EventKind::DataEnd(n)
            | EventKind::ExchangeEnd(n)
            | EventKind::Timeout(n)
            | EventKind::CycleAbort(n) => Some(n),
            EventKind::IntervalBoundary(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub time: SimTime,
    pub kind: &'static str,
    pub node: Option<usize>,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(n) => write!(f, "{} {} {}", self.time, self.kind, n),
            None => write!(f, "{} {} -", self.time, self.kind),
        }
    }
}

/// Bits delivered by one data frame, stamped at its reception.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodputSample {
    pub time: SimTime,
    pub bits: u64,
}

/// One learning round.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    /// Cycle start, when the action was chosen.
    pub time: SimTime,
    pub duration_ms: f64,
    pub action: Action,
    pub reward: f64,
    pub context_hash: u64,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct NodeStats {
    pub goodput: Vec<GoodputSample>,
    /// Delay histograms split at the network's delay boundaries.
    pub delays: Vec<DelayHistogram>,
    pub acked_packets: u64,
    pub acked_bytes: u64,
    pub retry_drops: u64,
    pub overflow_drops: u64,
    pub generated_packets: u64,
    pub successes: u64,
    pub failures: u64,
    pub aborts: u64,
    pub decisions: Vec<DecisionRecord>,
}

/// New generator parameters taking effect at `at`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadChange {
    pub at: SimTime,
    pub updates: Vec<(usize, TrafficModel)>,
}

#[derive(Clone, Debug)]
pub struct NetworkOptions {
    pub bonding: BondingMode,
    pub seed: u64,
    pub trial: u32,
    pub packet_error_rate: f64,
    /// Sorted cut points for delay histograms.
    pub delay_boundaries: Vec<SimTime>,
    pub load_changes: Vec<LoadChange>,
    pub trace: bool,
}

impl NetworkOptions {
    pub fn new(bonding: BondingMode, seed: u64, trial: u32) -> Self {
        NetworkOptions {
            bonding,
            seed,
            trial,
            packet_error_rate: crate::traffic::PACKET_ERROR_RATE,
            delay_boundaries: Vec::new(),
            load_changes: Vec::new(),
            trace: false,
        }
    }
}

enum Phase {
    Idle,
    Contending {
        remaining: u64,
        /// Earliest instant the DIFS wait may start from.
        wait_from: SimTime,
        /// Countdown start and the pending expiry, while the primary is idle.
        countdown: Option<(SimTime, EventHandle)>,
    },
    Rts {
        tx: TxId,
        set: ChannelSet,
        ampdu: Ampdu,
    },
    Data {
        tx: TxId,
        ampdu: Ampdu,
        delivered: Vec<bool>,
    },
    Ack {
        tx: TxId,
    },
    Timeout {
        ampdu: Ampdu,
    },
}

struct Cycle {
    start: SimTime,
    action: Option<Action>,
    context_hash: u64,
    abort: Option<EventHandle>,
    abort_pending: bool,
    bytes_acked: u64,
}

struct Node {
    policy: Policy,
    traffic: TrafficModel,
    mcs: Mcs,
    queue: TxQueue,
    arrival: Option<EventHandle>,
    backoff_rng: RngStream,
    per_rng: RngStream,
    traffic_rng: RngStream,
    cfg: DcfConfig,
    legacy_cw: u32,
    phase: Phase,
    cycle: Option<Cycle>,
    stats: NodeStats,
}

pub struct Network {
    sched: Scheduler<EventKind>,
    spectrum: SpectrumState,
    nodes: Vec<Node>,
    /// Deferral-view count of audible transmissions per node and channel.
    busy: Vec<[u32; NUM_BASIC_CHANNELS]>,
    idle_since: Vec<[SimTime; NUM_BASIC_CHANNELS]>,
    opts: NetworkOptions,
    trace: Vec<TraceLine>,
    cycles: Vec<CycleRecord>,
    keep_cycles: bool,
}

fn width_of(set: ChannelSet) -> Width {
    match set.len() {
        1 => Width::Mhz20,
        2 => Width::Mhz40,
        _ => Width::Mhz80,
    }
}

const ABORT_AFTER: SimTime = SimTime::from_millis(D_MAX_MS as u64);

impl Network {
    /// `hears[i][j]`: BSS `i` senses transmissions of BSS `j`.
    pub fn new(setups: Vec<NodeSetup>, hears: Vec<Vec<bool>>, opts: NetworkOptions) -> Self {
        let n = setups.len();
        assert_eq!(hears.len(), n, "hearing matrix size");
        let stream = |node: usize, purpose| {
            RngStream::new(opts.seed, StreamId::new(opts.trial, node as u32, purpose))
        };
        let nodes = setups
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                let cfg = match &s.policy {
                    Policy::Static { channel, primary } => DcfConfig {
                        primary: *primary,
                        ..DcfConfig::legacy(*channel, opts.bonding)
                    },
                    Policy::Learning(_) => {
                        DcfConfig::legacy(OperationalChannel::ALL[0], opts.bonding)
                    }
                };
                Node {
                    policy: s.policy,
                    traffic: s.traffic,
                    mcs: s.mcs,
                    queue: TxQueue::default(),
                    arrival: None,
                    backoff_rng: stream(i, Purpose::Backoff),
                    per_rng: stream(i, Purpose::PacketError),
                    traffic_rng: stream(i, Purpose::Traffic),
                    cfg,
                    legacy_cw: CW_MIN,
                    phase: Phase::Idle,
                    cycle: None,
                    stats: NodeStats {
                        delays: vec![DelayHistogram::new(); opts.delay_boundaries.len() + 1],
                        ..NodeStats::default()
                    },
                }
            })
            .collect();
        let mut net = Network {
            sched: Scheduler::new(),
            spectrum: SpectrumState::new(hears),
            nodes,
            busy: vec![[0; NUM_BASIC_CHANNELS]; n],
            idle_since: vec![[SimTime::ZERO; NUM_BASIC_CHANNELS]; n],
            opts,
            trace: Vec::new(),
            cycles: Vec::new(),
            keep_cycles: false,
        };
        for k in 0..net.opts.load_changes.len() {
            let at = net.opts.load_changes[k].at;
            net.sched.schedule(at, EventKind::IntervalBoundary(k));
        }
        for i in 0..n {
            if net.nodes[i].traffic == TrafficModel::FullBuffer {
                net.nodes[i].queue.fill(SimTime::ZERO, PACKET_BYTES);
                net.nodes[i].stats.generated_packets += net.nodes[i].queue.len() as u64;
                net.start_cycle(i);
            } else {
                net.schedule_arrival(i);
            }
        }
        net
    }

    /// Keeps every finished cycle for inspection (off by default).
    pub fn record_cycles(&mut self, on: bool) {
        self.keep_cycles = on;
    }

    pub fn now(&self) -> SimTime {
        self.sched.now()
    }

    pub fn events_executed(&self) -> u64 {
        self.sched.executed()
    }

    pub fn stats(&self, node: usize) -> &NodeStats {
        &self.nodes[node].stats
    }

    pub fn queue_len(&self, node: usize) -> usize {
        self.nodes[node].queue.len()
    }

    pub fn cycles(&self) -> &[CycleRecord] {
        &self.cycles
    }

    pub fn trace(&self) -> &[TraceLine] {
        &self.trace
    }

    /// Executes every event up to and including `end`.
    pub fn run_until(&mut self, end: SimTime) {
        while let Some(ev) = self.sched.pop_until(end) {
            if self.opts.trace {
                self.trace.push(TraceLine {
                    time: ev.fire_at,
                    kind: ev.kind.name(),
                    node: ev.kind.node(),
                });
            }
            self.handle(ev.kind);
        }
    }

    pub fn into_stats(self) -> Vec<NodeStats> {
        self.nodes
            .into_iter()
            .map(|mut n| {
                n.stats.overflow_drops = n.queue.overflow_drops();
                n.stats
            })
            .collect()
    }

    pub fn into_parts(mut self) -> (Vec<NodeStats>, Vec<TraceLine>) {
        let trace = std::mem::take(&mut self.trace);
        (self.into_stats(), trace)
    }

    fn handle(&mut self, kind: EventKind) {
        match kind {
            EventKind::Arrival(i) => self.on_arrival(i),
            EventKind::BackoffExpiry(i) => self.on_backoff_expiry(i),
            EventKind::RtsEnd(i) => self.on_rts_end(i),
            EventKind::DataEnd(i) => self.on_data_end(i),
            EventKind::ExchangeEnd(i) => self.on_exchange_end(i),
            EventKind::Timeout(i) => self.on_timeout(i),
            EventKind::CycleAbort(i) => self.on_cycle_abort(i),
            EventKind::IntervalBoundary(k) => self.on_interval_boundary(k),
        }
    }

    // Traffic

    fn schedule_arrival(&mut self, i: usize) {
        let node = &mut self.nodes[i];
        node.arrival = next_arrival(&node.traffic, &mut node.traffic_rng)
            .map(|(dt, _)| self.sched.schedule_in(dt, EventKind::Arrival(i)));
    }

    fn on_arrival(&mut self, i: usize) {
        let now = self.now();
        let node = &mut self.nodes[i];
        for bytes in node.traffic.arrival_sizes() {
            node.queue.push(now, bytes);
            node.stats.generated_packets += 1;
        }
        self.schedule_arrival(i);
        if matches!(self.nodes[i].phase, Phase::Idle) && !self.nodes[i].queue.is_empty() {
            self.start_cycle(i);
        }
    }

    fn on_interval_boundary(&mut self, k: usize) {
        let updates = self.opts.load_changes[k].updates.clone();
        for (i, model) in updates {
            self.nodes[i].traffic = model;
            if let Some(h) = self.nodes[i].arrival.take() {
                self.sched.cancel(h);
            }
            self.schedule_arrival(i);
        }
    }

    // Medium bookkeeping

    fn begin_tx(&mut self, src: usize, set: ChannelSet) -> TxId {
        let now = self.now();
        let id = self.spectrum.begin(src, set, now);
        for l in 0..self.nodes.len() {
            if !self.spectrum.hears(l, src) {
                continue;
            }
            for c in set.iter() {
                self.busy[l][c.slot()] += 1;
                if self.busy[l][c.slot()] == 1 && self.nodes[l].cfg.primary == c {
                    self.freeze(l);
                }
            }
        }
        id
    }

    fn finish_tx(&mut self, id: TxId) {
        let now = self.now();
        let tx = self.spectrum.finish(id, now);
        for l in 0..self.nodes.len() {
            if !self.spectrum.hears(l, tx.source) {
                continue;
            }
            for c in tx.channels.iter() {
                self.busy[l][c.slot()] -= 1;
                if self.busy[l][c.slot()] == 0 {
                    self.idle_since[l][c.slot()] = now;
                    if self.nodes[l].cfg.primary == c {
                        self.resume(l);
                    }
                }
            }
        }
    }

    /// Starts (or restarts) the countdown if the primary is idle.
    fn resume(&mut self, i: usize) {
        let p = self.nodes[i].cfg.primary.slot();
        if self.busy[i][p] > 0 {
            return;
        }
        let idle_since = self.idle_since[i][p];
        if let Phase::Contending {
            remaining,
            wait_from,
            countdown,
        } = &mut self.nodes[i].phase
        {
            if countdown.is_some() {
                return;
            }
            let start = (*wait_from).max(idle_since) + DIFS;
            let at = start + SLOT.times(*remaining);
            let h = self.sched.schedule(at, EventKind::BackoffExpiry(i));
            *countdown = Some((start, h));
        }
    }

    /// Primary turned busy: bank the idle slots already counted down.
    fn freeze(&mut self, i: usize) {
        let now = self.now();
        if let Phase::Contending {
            remaining,
            countdown,
            ..
        } = &mut self.nodes[i].phase
        {
            let Some((start, h)) = *countdown else {
                return;
            };
            if start + SLOT.times(*remaining) == now {
                // Expires in this very instant: the busy medium is not yet
                // detectable, so the node transmits as well.
                return;
            }
            if now > start {
                let done = (now - start).as_nanos() / SLOT.as_nanos();
                *remaining -= done.min(*remaining);
            }
            self.sched.cancel(h);
            *countdown = None;
        }
    }

    fn draw_backoff(&mut self, i: usize) -> u64 {
        let cw = u64::from(self.nodes[i].cfg.cw);
        self.nodes[i].backoff_rng.below(cw)
    }

    fn contend(&mut self, i: usize) {
        let remaining = self.draw_backoff(i);
        let now = self.now();
        self.nodes[i].phase = Phase::Contending {
            remaining,
            wait_from: now,
            countdown: None,
        };
        self.resume(i);
    }

    // Cycle lifecycle

    fn sensors(&self, i: usize) -> Sensors {
        let now = self.now();
        let mut s = Sensors {
            queue_utilization: self.nodes[i].queue.utilization(),
            ..Sensors::default()
        };
        for c in ChannelId::ALL {
            s.occupancy[c.slot()] = self.spectrum.occupancy_ratio(i, c, now);
            s.busy[c.slot()] = self.spectrum.is_busy(i, c, SenseView::Feature);
        }
        s
    }

    fn start_cycle(&mut self, i: usize) {
        let now = self.now();
        let sensors = match self.nodes[i].policy {
            Policy::Learning(_) => Some(self.sensors(i)),
            Policy::Static { .. } => None,
        };
        let bonding = self.opts.bonding;
        let node = &mut self.nodes[i];
        let mut cycle = Cycle {
            start: now,
            action: None,
            context_hash: 0,
            abort: None,
            abort_pending: false,
            bytes_acked: 0,
        };
        match &mut node.policy {
            Policy::Static { channel, primary } => {
                node.cfg = DcfConfig {
                    cw: node.legacy_cw,
                    primary: *primary,
                    ..DcfConfig::legacy(*channel, bonding)
                };
            }
            Policy::Learning(agent) => {
                let decision = agent
                    .step(&sensors.expect("sensed above"))
                    .expect("one pending step per cycle");
                node.cfg = DcfConfig::learning(decision.action, bonding);
                cycle.action = Some(decision.action);
                cycle.context_hash = decision.context_fingerprint;
                cycle.abort = Some(
                    self.sched
                        .schedule(now + ABORT_AFTER, EventKind::CycleAbort(i)),
                );
            }
        }
        node.cycle = Some(cycle);
        self.contend(i);
    }

    fn end_cycle(&mut self, i: usize, outcome: Outcome) {
        let now = self.now();
        let node = &mut self.nodes[i];
        let cycle = node
            .cycle
            .take()
            .expect("ending a cycle that never started");
        if let Some(h) = cycle.abort {
            self.sched.cancel(h);
        }
        let record = CycleRecord {
            start: cycle.start,
            end: now,
            outcome,
            action: cycle.action,
            bytes_acked: cycle.bytes_acked,
        };
        match outcome {
            Outcome::Success => node.stats.successes += 1,
            Outcome::Failure => node.stats.failures += 1,
            Outcome::Aborted => node.stats.aborts += 1,
        }
        match &mut node.policy {
            Policy::Learning(agent) => {
                let reward = compute_reward(record.duration_ms());
                agent.feedback(reward).expect("step pending for this cycle");
                node.stats.decisions.push(DecisionRecord {
                    time: record.start,
                    duration_ms: record.duration_ms(),
                    action: record.action.expect("learning cycles carry an action"),
                    reward,
                    context_hash: cycle.context_hash,
                    outcome,
                });
            }
            Policy::Static { .. } => {
                // Success resets the window; so does giving up on a frame.
                node.legacy_cw = match outcome {
                    Outcome::Failure => CW_MIN,
                    _ => beb_update(&node.cfg, outcome),
                };
            }
        }
        if self.keep_cycles {
            self.cycles.push(record);
        }
        node.phase = Phase::Idle;
        if !node.queue.is_empty() {
            self.start_cycle(i);
        }
    }

    fn on_cycle_abort(&mut self, i: usize) {
        let node = &mut self.nodes[i];
        let Some(cycle) = node.cycle.as_mut() else {
            return;
        };
        cycle.abort = None;
        match &mut node.phase {
            Phase::Contending { countdown, .. } => {
                if let Some((_, h)) = countdown.take() {
                    self.sched.cancel(h);
                }
                self.end_cycle(i, Outcome::Aborted);
            }
            _ => cycle.abort_pending = true,
        }
    }

    // Frame exchange

    fn on_backoff_expiry(&mut self, i: usize) {
        let now = self.now();
        if let Phase::Contending { countdown, .. } = &mut self.nodes[i].phase {
            *countdown = None;
        } else {
            unreachable!("backoff expiry outside contention");
        }
        let cfg = self.nodes[i].cfg;
        let mut busy = [false; NUM_BASIC_CHANNELS];
        for c in cfg.channel.members().iter().filter(|&c| c != cfg.primary) {
            busy[c.slot()] = !self.spectrum.idle_over(i, c, now, PIFS);
        }
        let set = match cfg.bonding {
            BondingMode::Scb => match scb_gate(cfg.channel, cfg.primary, &busy) {
                BondDecision::Transmit(set) => set,
                BondDecision::Defer => {
                    self.contend(i);
                    return;
                }
            },
            BondingMode::Dcb => dcb_transmit_set(cfg.channel, cfg.primary, &busy),
        };
        let ampdu =
            aggregate_ampdu(&self.nodes[i].queue).expect("cycles run with a non-empty queue");
        let tx = self.begin_tx(i, set);
        self.nodes[i].phase = Phase::Rts { tx, set, ampdu };
        self.sched
            .schedule_in(control_airtime(RTS_BYTES), EventKind::RtsEnd(i));
    }

    fn on_rts_end(&mut self, i: usize) {
        let Phase::Rts { tx, set, ampdu } =
            std::mem::replace(&mut self.nodes[i].phase, Phase::Idle)
        else {
            unreachable!("rts end outside an exchange");
        };
        let corrupted = self.spectrum.transmission(tx).is_some_and(|t| t.corrupted);
        if corrupted {
            self.finish_tx(tx);
            self.nodes[i].phase = Phase::Timeout { ampdu };
            self.sched.schedule_in(
                SIFS + control_airtime(CTS_BYTES) + SLOT,
                EventKind::Timeout(i),
            );
            return;
        }
        let per = self.opts.packet_error_rate;
        let node = &mut self.nodes[i];
        let delivered: Vec<bool> = (0..ampdu.len())
            .map(|_| !node.per_rng.bernoulli(per))
            .collect();
        let mode = PhyMode::new(node.mcs, width_of(set), SPATIAL_STREAMS);
        let data = frame_airtime(ampdu.bytes(), mode).expect("A-MPDU within size limit");
        node.phase = Phase::Data {
            tx,
            ampdu,
            delivered,
        };
        self.sched.schedule_in(
            SIFS + control_airtime(CTS_BYTES) + SIFS + data,
            EventKind::DataEnd(i),
        );
    }

    fn on_data_end(&mut self, i: usize) {
        let now = self.now();
        let Phase::Data {
            tx,
            ampdu,
            mut delivered,
        } = std::mem::replace(&mut self.nodes[i].phase, Phase::Idle)
        else {
            unreachable!("data end outside an exchange");
        };
        if self.spectrum.transmission(tx).is_some_and(|t| t.corrupted) {
            delivered.iter_mut().for_each(|d| *d = false);
        }
        if !delivered.iter().any(|&d| d) {
            self.nodes[i]
                .stats
                .goodput
                .push(GoodputSample { time: now, bits: 0 });
            self.finish_tx(tx);
            self.nodes[i].phase = Phase::Timeout { ampdu };
            self.sched.schedule_in(
                SIFS + control_airtime(BLOCK_ACK_BYTES) + SLOT,
                EventKind::Timeout(i),
            );
            return;
        }
        let ack_time = now + SIFS + control_airtime(BLOCK_ACK_BYTES);
        let seg = self
            .opts
            .delay_boundaries
            .partition_point(|b| *b <= ack_time);
        let node = &mut self.nodes[i];
        let (acked, dropped) = node.queue.settle(&ampdu, &delivered, RETRY_LIMIT);
        let bytes: u64 = acked.iter().map(|p| u64::from(p.bytes)).sum();
        for p in &acked {
            node.stats.delays[seg].record(ack_time - p.generated);
        }
        node.stats.goodput.push(GoodputSample {
            time: now,
            bits: bytes * 8,
        });
        node.stats.acked_packets += acked.len() as u64;
        node.stats.acked_bytes += bytes;
        node.stats.retry_drops += dropped.len() as u64;
        if let Some(c) = node.cycle.as_mut() {
            c.bytes_acked += bytes;
        }
        Self::refill(node, now);
        node.phase = Phase::Ack { tx };
        self.sched.schedule(ack_time, EventKind::ExchangeEnd(i));
    }

    fn refill(node: &mut Node, now: SimTime) {
        if node.traffic == TrafficModel::FullBuffer {
            let before = node.queue.len();
            node.queue.fill(now, PACKET_BYTES);
            node.stats.generated_packets += (node.queue.len() - before) as u64;
        }
    }

    fn on_exchange_end(&mut self, i: usize) {
        let Phase::Ack { tx } = std::mem::replace(&mut self.nodes[i].phase, Phase::Idle) else {
            unreachable!("exchange end outside an exchange");
        };
        self.finish_tx(tx);
        self.end_cycle(i, Outcome::Success);
    }

    fn on_timeout(&mut self, i: usize) {
        let now = self.now();
        let Phase::Timeout { ampdu } = std::mem::replace(&mut self.nodes[i].phase, Phase::Idle)
        else {
            unreachable!("timeout outside an exchange");
        };
        let node = &mut self.nodes[i];
        let (_, dropped) = node
            .queue
            .settle(&ampdu, &vec![false; ampdu.len()], RETRY_LIMIT);
        node.stats.retry_drops += dropped.len() as u64;
        Self::refill(node, now);
        if !dropped.is_empty() {
            self.end_cycle(i, Outcome::Failure);
            return;
        }
        if node.cycle.as_ref().is_some_and(|c| c.abort_pending) {
            self.end_cycle(i, Outcome::Aborted);
            return;
        }
        node.cfg.cw = beb_update(&node.cfg, Outcome::Failure);
        self.contend(i);
    }
}
