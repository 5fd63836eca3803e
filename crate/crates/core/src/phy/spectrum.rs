//! Shared medium: active transmissions, collisions and sensing history.

use std::collections::VecDeque;

use super::{ChannelId, ChannelSet, NUM_BASIC_CHANNELS};
use crate::engine::SimTime;

pub type TxId = u64;

/// Trailing window for occupancy ratios.
pub const OCCUPANCY_WINDOW: SimTime = SimTime::from_millis(100);

/// A frame exchange occupying a set of basic channels.
#[derive(Clone, Debug, PartialEq)]
pub struct Transmission {
    pub id: TxId,
    /// BSS index of the transmitter (AP and STA frames share it).
    pub source: usize,
    pub channels: ChannelSet,
    pub start: SimTime,
    pub end: Option<SimTime>,
    pub corrupted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BusyInterval {
    pub start: SimTime,
    /// `None` while the transmission is still on air.
    pub end: Option<SimTime>,
    pub source: usize,
    pub tx: TxId,
}

/// Which activity counts as busy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SenseView {
    /// Every audible transmission, own BSS included. Drives DCF deferral.
    Deferral,
    /// Audible transmissions of other BSSs only. Drives context features.
    Feature,
}

pub struct SpectrumState {
    /// `hears[listener][source]`: whether `source` is received above the
    /// carrier-sense threshold at `listener`.
    hears: Vec<Vec<bool>>,
    active: Vec<Transmission>,
    history: [VecDeque<BusyInterval>; NUM_BASIC_CHANNELS],
    /// Latest end time of a finished interval, per channel and source.
    last_end: [Vec<Option<SimTime>>; NUM_BASIC_CHANNELS],
    next_id: TxId,
}

impl SpectrumState {
    pub fn new(hears: Vec<Vec<bool>>) -> Self {
        let n = hears.len();
        assert!(
            hears.iter().all(|row| row.len() == n),
            "hearing matrix must be square"
        );
        SpectrumState {
            hears,
            active: Vec::new(),
            history: Default::default(),
            last_end: std::array::from_fn(|_| vec![None; n]),
            next_id: 0,
        }
    }

    /// Every node hears every other node.
    pub fn fully_connected(nodes: usize) -> Self {
        SpectrumState::new(vec![vec![true; nodes]; nodes])
    }

    pub fn nodes(&self) -> usize {
        self.hears.len()
    }

    pub fn hears(&self, listener: usize, source: usize) -> bool {
        self.hears[listener][source]
    }

    pub fn active(&self) -> &[Transmission] {
        &self.active
    }

    pub fn transmission(&self, id: TxId) -> Option<&Transmission> {
        self.active.iter().find(|t| t.id == id)
    }

    /// Puts a transmission on air. Any concurrent transmission sharing a
    /// channel is corrupted together with the new one.
    pub fn begin(&mut self, source: usize, channels: ChannelSet, now: SimTime) -> TxId {
        assert!(!channels.is_empty());
        let id = self.next_id;
        self.next_id += 1;
        let mut corrupted = false;
        for other in self.active.iter_mut() {
            if other.channels.intersects(channels) {
                other.corrupted = true;
                corrupted = true;
            }
        }
        self.active.push(Transmission {
            id,
            source,
            channels,
            start: now,
            end: None,
            corrupted,
        });
        for c in channels.iter() {
            self.history[c.slot()].push_back(BusyInterval {
                start: now,
                end: None,
                source,
                tx: id,
            });
        }
        id
    }

    /// Takes a transmission off the air and returns its final record.
    pub fn finish(&mut self, id: TxId, now: SimTime) -> Transmission {
        let pos = self
            .active
            .iter()
            .position(|t| t.id == id)
            .expect("finishing an unknown transmission");
        let mut tx = self.active.swap_remove(pos);
        tx.end = Some(now);
        for c in tx.channels.iter() {
            let slot = c.slot();
            if let Some(iv) = self.history[slot].iter_mut().rev().find(|iv| iv.tx == id) {
                iv.end = Some(now);
            }
            let last = &mut self.last_end[slot][tx.source];
            *last = Some(last.map_or(now, |t| t.max(now)));
        }
        self.prune(now);
        tx
    }

    fn counts(&self, listener: usize, source: usize, view: SenseView) -> bool {
        self.hears[listener][source] && (view == SenseView::Deferral || source != listener)
    }

    /// Instantaneous busy state of one channel as seen by `node`.
    pub fn is_busy(&self, node: usize, channel: ChannelId, view: SenseView) -> bool {
        self.active
            .iter()
            .any(|t| t.channels.contains(channel) && self.counts(node, t.source, view))
    }

    /// Per-channel busy flags for the channels in `channels` (others false).
    pub fn sense(
        &self,
        node: usize,
        channels: ChannelSet,
        view: SenseView,
    ) -> [bool; NUM_BASIC_CHANNELS] {
        let mut flags = [false; NUM_BASIC_CHANNELS];
        for c in channels.iter() {
            flags[c.slot()] = self.is_busy(node, c, view);
        }
        flags
    }

    /// Whether `channel` has been idle (deferral view) throughout
    /// `[now - window, now]`. Transmissions starting exactly at `now` are not
    /// yet detectable.
    pub fn idle_over(
        &self,
        node: usize,
        channel: ChannelId,
        now: SimTime,
        window: SimTime,
    ) -> bool {
        let on_air = self
            .active
            .iter()
            .any(|t| t.channels.contains(channel) && t.start < now && self.hears[node][t.source]);
        if on_air {
            return false;
        }
        let since = now.saturating_sub(window);
        self.last_end[channel.slot()]
            .iter()
            .enumerate()
            .all(|(src, end)| !self.hears[node][src] || end.is_none_or(|e| e <= since))
    }

    /// Fraction of the trailing window during which `channel` was busy from
    /// the feature view of `node`. Before one full window has elapsed the
    /// elapsed time is the denominator.
    pub fn occupancy_ratio(&self, node: usize, channel: ChannelId, now: SimTime) -> f64 {
        let window_start = now.saturating_sub(OCCUPANCY_WINDOW);
        let window = now - window_start;
        if window == SimTime::ZERO {
            return 0.0;
        }
        let mut busy = 0u64;
        let mut covered_until = window_start;
        // Intervals are stored in start order, so one sweep merges overlaps.
        for iv in &self.history[channel.slot()] {
            if !self.counts(node, iv.source, SenseView::Feature) {
                continue;
            }
            let end = iv.end.unwrap_or(now).min(now);
            let start = iv.start.max(covered_until);
            if end > start {
                busy += (end - start).as_nanos();
                covered_until = end;
            }
        }
        (busy as f64 / window.as_nanos() as f64).clamp(0.0, 1.0)
    }

    fn prune(&mut self, now: SimTime) {
        let cutoff = now.saturating_sub(OCCUPANCY_WINDOW);
        for h in self.history.iter_mut() {
            while h
                .front()
                .is_some_and(|iv| iv.end.is_some_and(|e| e < cutoff))
            {
                h.pop_front();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(i: u8) -> ChannelId {
        ChannelId::new(i).unwrap()
    }

    fn set(ids: &[u8]) -> ChannelSet {
        ids.iter().map(|&i| ch(i)).collect()
    }

    fn ms(v: u64) -> SimTime {
        SimTime::from_millis(v)
    }

    #[test]
    fn silent_medium_is_idle() {
        let s = SpectrumState::fully_connected(2);
        assert_eq!(
            s.sense(0, ChannelSet::FULL, SenseView::Deferral),
            [false; 4]
        );
        assert_eq!(s.occupancy_ratio(0, ch(1), ms(50)), 0.0);
    }

    #[test]
    fn forty_mhz_transmission_marks_its_channels() {
        let mut s = SpectrumState::fully_connected(2);
        s.begin(1, set(&[3, 4]), ms(1));
        assert_eq!(
            s.sense(0, ChannelSet::FULL, SenseView::Feature),
            [false, false, true, true]
        );
    }

    #[test]
    fn own_bss_busy_only_for_deferral() {
        let mut s = SpectrumState::fully_connected(2);
        s.begin(0, set(&[2]), ms(1));
        assert!(s.is_busy(0, ch(2), SenseView::Deferral));
        assert!(!s.is_busy(0, ch(2), SenseView::Feature));
        assert!(s.is_busy(1, ch(2), SenseView::Feature));
    }

    #[test]
    fn overlapping_transmissions_corrupt_each_other() {
        let mut s = SpectrumState::fully_connected(3);
        let a = s.begin(0, set(&[1, 2]), ms(1));
        let b = s.begin(1, set(&[3]), ms(1));
        let c = s.begin(2, set(&[2]), ms(1));
        assert!(s.finish(a, ms(2)).corrupted);
        assert!(!s.finish(b, ms(2)).corrupted);
        assert!(s.finish(c, ms(2)).corrupted);
    }

    #[test]
    fn occupancy_ratio_cases() {
        let mut s = SpectrumState::fully_connected(2);
        let t = s.begin(1, set(&[1]), ms(120));
        s.finish(t, ms(150));
        assert!((s.occupancy_ratio(0, ch(1), ms(200)) - 0.3).abs() < 1e-12);
        // own transmissions excluded
        assert_eq!(s.occupancy_ratio(1, ch(1), ms(200)), 0.0);

        let mut full = SpectrumState::fully_connected(2);
        full.begin(1, set(&[4]), ms(0));
        assert_eq!(full.occupancy_ratio(0, ch(4), ms(300)), 1.0);
        // elapsed-time denominator before the window fills
        assert!((full.occupancy_ratio(0, ch(4), ms(40)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn occupancy_invariant_to_splitting() {
        let mut whole = SpectrumState::fully_connected(2);
        let t = whole.begin(1, set(&[2]), ms(10));
        whole.finish(t, ms(70));
        let mut split = SpectrumState::fully_connected(2);
        for (a, b) in [(10, 25), (25, 40), (40, 70)] {
            let t = split.begin(1, set(&[2]), ms(a));
            split.finish(t, ms(b));
        }
        let now = ms(90);
        assert_eq!(
            whole.occupancy_ratio(0, ch(2), now),
            split.occupancy_ratio(0, ch(2), now)
        );
    }

    #[test]
    fn concurrent_sources_are_merged() {
        let mut s = SpectrumState::fully_connected(3);
        let a = s.begin(1, set(&[1]), ms(100));
        let b = s.begin(2, set(&[1]), ms(100));
        s.finish(a, ms(110));
        s.finish(b, ms(130));
        assert!((s.occupancy_ratio(0, ch(1), ms(200)) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn idle_over_respects_window_and_start_instant() {
        let mut s = SpectrumState::fully_connected(2);
        let pifs = SimTime::from_micros(25);
        let t = s.begin(1, set(&[2]), SimTime::from_micros(100));
        assert!(s.idle_over(0, ch(2), SimTime::from_micros(100), pifs));
        assert!(!s.idle_over(0, ch(2), SimTime::from_micros(101), pifs));
        s.finish(t, SimTime::from_micros(200));
        assert!(!s.idle_over(0, ch(2), SimTime::from_micros(210), pifs));
        assert!(s.idle_over(0, ch(2), SimTime::from_micros(225), pifs));
    }

    #[test]
    fn unheard_sources_are_invisible() {
        let mut s = SpectrumState::new(vec![vec![true, false], vec![true, true]]);
        s.begin(1, set(&[1]), ms(1));
        assert!(!s.is_busy(0, ch(1), SenseView::Deferral));
        assert!(s.idle_over(0, ch(1), ms(2), SimTime::from_micros(25)));
    }
}
