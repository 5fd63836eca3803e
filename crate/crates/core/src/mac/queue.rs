use std::collections::VecDeque;

use crate::engine::SimTime;
use crate::phy::MAX_AMPDU_BYTES;

pub const PACKET_BYTES: u32 = 1500;
pub const QUEUE_CAPACITY: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Packet {
    pub id: u64,
    pub generated: SimTime,
    pub bytes: u32,
    /// Failed delivery attempts so far.
    pub retries: u32,
}

/// Drop-tail FIFO.
#[derive(Clone, Debug)]
pub struct TxQueue {
    packets: VecDeque<Packet>,
    capacity: usize,
    next_id: u64,
    overflow_drops: u64,
}

impl Default for TxQueue {
    fn default() -> Self {
        TxQueue::new(QUEUE_CAPACITY)
    }
}

impl TxQueue {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        TxQueue {
            packets: VecDeque::with_capacity(capacity),
            capacity,
            next_id: 0,
            overflow_drops: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn utilization(&self) -> f64 {
        self.packets.len() as f64 / self.capacity as f64
    }

    pub fn overflow_drops(&self) -> u64 {
        self.overflow_drops
    }

    pub fn iter(&self) -> impl Iterator<Item = &Packet> {
        self.packets.iter()
    }

    /// Enqueues a fresh packet. Returns `false` if it was tail-dropped.
    pub fn push(&mut self, generated: SimTime, bytes: u32) -> bool {
        let id = self.next_id;
        self.next_id += 1;
        if self.packets.len() >= self.capacity {
            self.overflow_drops += 1;
            return false;
        }
        self.packets.push_back(Packet {
            id,
            generated,
            bytes,
            retries: 0,
        });
        true
    }

    /// Tops the queue up to capacity with packets generated at `now`.
    pub fn fill(&mut self, now: SimTime, bytes: u32) {
        while self.packets.len() < self.capacity {
            self.push(now, bytes);
        }
    }

    /// Settles an A-MPDU taken from the head: delivered MPDUs leave, failed
    /// ones stay in order with one more retry, and those past `retry_limit`
    /// are discarded. Returns `(acked, dropped)`.
    pub fn settle(
        &mut self,
        ampdu: &Ampdu,
        delivered: &[bool],
        retry_limit: u32,
    ) -> (Vec<Packet>, Vec<Packet>) {
        assert_eq!(ampdu.len(), delivered.len());
        let mut acked = Vec::new();
        let mut dropped = Vec::new();
        let mut keep = Vec::new();
        for (&ok, mpdu) in delivered.iter().zip(&ampdu.mpdus) {
            let mut p = self.packets.pop_front().expect("A-MPDU larger than queue");
            debug_assert_eq!(p.id, mpdu.id, "A-MPDU is not the queue head");
            if ok {
                acked.push(p);
            } else {
                p.retries += 1;
                if p.retries > retry_limit {
                    dropped.push(p);
                } else {
                    keep.push(p);
                }
            }
        }
        for p in keep.into_iter().rev() {
            self.packets.push_front(p);
        }
        (acked, dropped)
    }
}

/// Snapshot of head-of-line packets sent in one PPDU.
#[derive(Clone, Debug, PartialEq)]
pub struct Ampdu {
    pub mpdus: Vec<Packet>,
}

impl Ampdu {
    pub fn len(&self) -> usize {
        self.mpdus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mpdus.is_empty()
    }

    pub fn bytes(&self) -> usize {
        self.mpdus.iter().map(|p| p.bytes as usize).sum()
    }
}

/// Largest FIFO prefix of the queue that fits in one A-MPDU. Packets are not
/// removed here; they leave only once acknowledged or dropped.
pub fn aggregate_ampdu(queue: &TxQueue) -> Option<Ampdu> {
    let mut total = 0usize;
    let mpdus: Vec<Packet> = queue
        .iter()
        .take_while(|p| {
            total += p.bytes as usize;
            total <= MAX_AMPDU_BYTES
        })
        .copied()
        .collect();
    (!mpdus.is_empty()).then_some(Ampdu { mpdus })
}
