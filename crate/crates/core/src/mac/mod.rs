//! Per-AP DCF: channel access, bonding, aggregation and transmission cycles.

mod bonding;
mod config;
mod cycle;
mod network;
mod queue;

pub use bonding::{dcb_transmit_set, scb_gate, BondDecision};
pub use config::{beb_update, BondingMode, DcfConfig, CW_MAX, CW_MIN, RETRY_LIMIT};
pub use cycle::{CycleRecord, Outcome};
pub use network::{
    DecisionRecord, EventKind, GoodputSample, LoadChange, Network, NetworkOptions, NodeSetup,
    NodeStats, Policy, TraceLine,
};
pub use queue::{aggregate_ampdu, Ampdu, Packet, TxQueue, PACKET_BYTES, QUEUE_CAPACITY};

use thiserror::Error;

use crate::phy::{ChannelId, OperationalChannel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MacError {
    #[error("primary {primary} is not part of operational channel {channel}")]
    PrimaryOutsideChannel {
        channel: OperationalChannel,
        primary: ChannelId,
    },
    #[error("contention window {0} is not a power of two in 16..=1024")]
    InvalidCw(u32),
}
