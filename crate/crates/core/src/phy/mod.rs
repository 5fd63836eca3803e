//! Spectrum model over four 20 MHz basic channels.

mod channel;
mod propagation;
mod rates;
mod spectrum;

pub use channel::{ChannelId, ChannelSet, OperationalChannel, Width, NUM_BASIC_CHANNELS};
pub use propagation::{
    distance, path_loss_db, rssi_dbm, Position, CARRIER_HZ, CARRIER_SENSE_DBM, PATH_LOSS_EXPONENT,
    TX_POWER_DBM,
};
pub use rates::{
    control_airtime, frame_airtime, phy_rate, select_mcs, Mcs, PhyMode, BLOCK_ACK_BYTES, CTS_BYTES,
    DIFS, MAX_AMPDU_BYTES, MCS_SENSITIVITY_DBM, OFDM_SYMBOL, PHY_PREAMBLE, PIFS, RTS_BYTES, SIFS,
    SLOT, SPATIAL_STREAMS,
};
pub use spectrum::{BusyInterval, SenseView, SpectrumState, Transmission, TxId, OCCUPANCY_WINDOW};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhyError {
    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),
    #[error("rssi {0:.1} dBm is below the MCS 0 sensitivity; node unreachable")]
    Unreachable(f64),
    #[error("payload of {0} bytes exceeds the 65535-byte A-MPDU limit")]
    OversizePayload(usize),
    #[error("invalid channel index {0}")]
    InvalidChannel(u8),
    #[error("invalid operational channel label {0}")]
    InvalidOperationalChannel(u8),
    #[error("invalid MCS index {0}")]
    InvalidMcs(u8),
}
