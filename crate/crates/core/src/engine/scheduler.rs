use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::SimTime;

/// A scheduled occurrence. `(fire_at, sequence)` is a strict total order.
#[derive(Clone, Debug)]
pub struct Event<K> {
    pub fire_at: SimTime,
    pub sequence: u64,
    pub kind: K,
}

/// Opaque handle returned by [`Scheduler::schedule`]; used for cancellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EventHandle(u64);

struct Entry<K>(Event<K>);

impl<K> PartialEq for Entry<K> {
    fn eq(&self, other: &Self) -> bool {
        self.0.sequence == other.0.sequence
    }
}

impl<K> Eq for Entry<K> {}

impl<K> PartialOrd for Entry<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// BinaryHeap is a max-heap: reverse so the earliest event pops first.
impl<K> Ord for Entry<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.fire_at, self.0.sequence)
            .cmp(&(other.0.fire_at, other.0.sequence))
            .reverse()
    }
}

/// Priority queue of events with lazy cancellation.
pub struct Scheduler<K> {
    now: SimTime,
    next_sequence: u64,
    heap: BinaryHeap<Entry<K>>,
    cancelled: HashSet<u64>,
    live: HashSet<u64>,
    executed: u64,
}

impl<K> Default for Scheduler<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K> Scheduler<K> {
    pub fn new() -> Self {
        Scheduler {
            now: SimTime::ZERO,
            next_sequence: 0,
            heap: BinaryHeap::new(),
            cancelled: HashSet::new(),
            live: HashSet::new(),
            executed: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    /// Number of events popped (and therefore executed) so far.
    pub fn executed(&self) -> u64 {
        self.executed
    }

    /// Live (not cancelled) pending events.
    pub fn pending(&self) -> usize {
        self.live.len()
    }

    /// Schedules `kind` at absolute time `fire_at`.
    ///
    /// Panics if `fire_at` lies before the current clock: that is a causality
    /// bug in the caller and the run cannot be trusted past that point.
    pub fn schedule(&mut self, fire_at: SimTime, kind: K) -> EventHandle {
        assert!(
            fire_at >= self.now,
            "event scheduled in the past: fire_at={fire_at} now={}",
            self.now
        );
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        self.live.insert(sequence);
        self.heap.push(Entry(Event {
            fire_at,
            sequence,
            kind,
        }));
        EventHandle(sequence)
    }

    pub fn schedule_in(&mut self, delay: SimTime, kind: K) -> EventHandle {
        self.schedule(self.now + delay, kind)
    }

    /// Cancels a pending event. Cancelling an already-fired event is a no-op.
    pub fn cancel(&mut self, handle: EventHandle) {
        if self.live.remove(&handle.0) {
            self.cancelled.insert(handle.0);
        }
    }

    /// Pops the next live event with `fire_at <= limit`, advancing the clock.
    pub fn pop_until(&mut self, limit: SimTime) -> Option<Event<K>> {
        loop {
            let head = self.heap.peek()?;
            if head.0.fire_at > limit {
                return None;
            }
            let Entry(event) = self.heap.pop().expect("peeked entry");
            if self.cancelled.remove(&event.sequence) {
                continue;
            }
            self.live.remove(&event.sequence);
            self.now = event.fire_at;
            self.executed += 1;
            return Some(event);
        }
    }

    /// Executes all events with `fire_at <= end` in order and returns the
    /// final clock. The clock stops at the last executed event when the queue
    /// drains early, otherwise it is advanced to `end`.
    pub fn run_until<F>(&mut self, end: SimTime, mut handler: F) -> SimTime
    where
        F: FnMut(&mut Self, Event<K>),
    {
        while let Some(event) = self.pop_until(end) {
            handler(self, event);
        }
        if self.pending() > 0 && self.now < end {
            self.now = end;
        }
        self.now
    }
}
