//! 802.11ax SU rates, MCS selection and frame airtimes.

use serde::{Deserialize, Serialize};

use super::{PhyError, Width};
use crate::engine::SimTime;

pub const SLOT: SimTime = SimTime::from_micros(9);
pub const SIFS: SimTime = SimTime::from_micros(16);
/// SIFS + 2 slots.
pub const DIFS: SimTime = SimTime::from_micros(34);
/// SIFS + 1 slot.
pub const PIFS: SimTime = SimTime::from_micros(25);
pub const PHY_PREAMBLE: SimTime = SimTime::from_micros(44);
/// 12.8 us HE symbol + 0.8 us guard interval.
pub const OFDM_SYMBOL: SimTime = SimTime::from_nanos(13_600);
pub const SPATIAL_STREAMS: u32 = 2;
pub const MAX_AMPDU_BYTES: usize = 65_535;

pub const RTS_BYTES: usize = 20;
pub const CTS_BYTES: usize = 14;
pub const BLOCK_ACK_BYTES: usize = 32;

// Non-HT control frames at the 6 Mbps basic rate.
const LEGACY_PREAMBLE: SimTime = SimTime::from_micros(20);
const LEGACY_SYMBOL: SimTime = SimTime::from_micros(4);
const LEGACY_BITS_PER_SYMBOL: usize = 24;
const LEGACY_SERVICE_TAIL_BITS: usize = 16 + 6;

/// Minimum receive sensitivity per MCS (20 MHz column), dBm.
pub const MCS_SENSITIVITY_DBM: [f64; 12] = [
    -82.0, -79.0, -77.0, -74.0, -70.0, -66.0, -65.0, -64.0, -59.0, -57.0, -54.0, -52.0,
];

// (coded bits per subcarrier, coding rate numerator, denominator)
const MCS_TABLE: [(u64, u64, u64); 12] = [
    (1, 1, 2),
    (2, 1, 2),
    (2, 3, 4),
    (4, 1, 2),
    (4, 3, 4),
    (6, 2, 3),
    (6, 3, 4),
    (6, 5, 6),
    (8, 3, 4),
    (8, 5, 6),
    (10, 3, 4),
    (10, 5, 6),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Mcs(u8);

impl Mcs {
    pub const MAX: Mcs = Mcs(11);

    pub fn new(index: u8) -> Result<Self, PhyError> {
        if index <= 11 {
            Ok(Mcs(index))
        } else {
            Err(PhyError::InvalidMcs(index))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Mcs {
    type Error = PhyError;
    fn try_from(v: u8) -> Result<Self, PhyError> {
        Mcs::new(v)
    }
}

impl From<Mcs> for u8 {
    fn from(m: Mcs) -> u8 {
        m.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhyMode {
    pub mcs: Mcs,
    pub width: Width,
    pub nss: u32,
}

impl PhyMode {
    pub fn new(mcs: Mcs, width: Width, nss: u32) -> Self {
        PhyMode { mcs, width, nss }
    }

    /// Data bits per OFDM symbol as the exact fraction `(num, den)`.
    fn bits_per_symbol(self) -> (u64, u64) {
        let (bpsc, num, den) = MCS_TABLE[usize::from(self.mcs.0)];
        (
            self.width.data_subcarriers() * bpsc * num * u64::from(self.nss),
            den,
        )
    }

    pub fn rate_bps(self) -> f64 {
        phy_rate(self.mcs, self.width, self.nss)
    }
}

/// PHY bit rate in bits per second.
pub fn phy_rate(mcs: Mcs, width: Width, nss: u32) -> f64 {
    let (num, den) = PhyMode::new(mcs, width, nss).bits_per_symbol();
    num as f64 / den as f64 / (OFDM_SYMBOL.as_nanos() as f64 * 1e-9)
}

/// Highest MCS whose sensitivity threshold is at or below `rssi_dbm`.
pub fn select_mcs(rssi_dbm: f64) -> Result<Mcs, PhyError> {
    MCS_SENSITIVITY_DBM
        .iter()
        .rposition(|&threshold| threshold <= rssi_dbm)
        .map(|i| Mcs(i as u8))
        .ok_or(PhyError::Unreachable(rssi_dbm))
}

/// Airtime of an HE data PPDU: preamble plus whole OFDM symbols.
pub fn frame_airtime(payload_bytes: usize, mode: PhyMode) -> Result<SimTime, PhyError> {
    if payload_bytes > MAX_AMPDU_BYTES {
        return Err(PhyError::OversizePayload(payload_bytes));
    }
    let (num, den) = mode.bits_per_symbol();
    let bits = payload_bytes as u64 * 8;
    let symbols = (bits * den).div_ceil(num);
    Ok(PHY_PREAMBLE + OFDM_SYMBOL.times(symbols))
}

/// Airtime of a non-HT control frame (RTS, CTS, BlockAck) at 6 Mbps.
pub fn control_airtime(bytes: usize) -> SimTime {
    let bits = LEGACY_SERVICE_TAIL_BITS + 8 * bytes;
    LEGACY_PREAMBLE + LEGACY_SYMBOL.times(bits.div_ceil(LEGACY_BITS_PER_SYMBOL) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mcs(i: u8) -> Mcs {
        Mcs::new(i).unwrap()
    }

    #[test]
    fn reference_rates() {
        // 980 * 10 * 5/6 * 2 / 13.6 us etc.
        let r80 = phy_rate(mcs(11), Width::Mhz80, 2) / 1e6;
        let r20 = phy_rate(mcs(11), Width::Mhz20, 2) / 1e6;
        let r0 = phy_rate(mcs(0), Width::Mhz20, 2) / 1e6;
        assert!((r80 - 1200.98).abs() < 0.01, "{r80}");
        assert!((r20 - 286.76).abs() < 0.01, "{r20}");
        assert!((r0 - 17.21).abs() < 0.01, "{r0}");
    }

    #[test]
    fn rates_strictly_increase() {
        let widths = [Width::Mhz20, Width::Mhz40, Width::Mhz80];
        for w in widths {
            for m in 1..12 {
                assert!(phy_rate(mcs(m), w, 2) > phy_rate(mcs(m - 1), w, 2));
            }
        }
        for m in 0..12 {
            for pair in widths.windows(2) {
                assert!(phy_rate(mcs(m), pair[1], 2) > phy_rate(mcs(m), pair[0], 2));
            }
        }
    }

    #[test]
    fn mcs_selection() {
        assert_eq!(select_mcs(-6.0).unwrap(), Mcs::MAX);
        assert_eq!(select_mcs(-52.0).unwrap(), Mcs::MAX);
        assert_eq!(select_mcs(-52.1).unwrap(), mcs(10));
        assert_eq!(select_mcs(-82.0).unwrap(), mcs(0));
        assert!(matches!(select_mcs(-90.0), Err(PhyError::Unreachable(_))));
        let mut last = 0;
        for tenth in -1000..0 {
            let m = select_mcs(tenth as f64 / 10.0)
                .map(|m| m.index())
                .unwrap_or(0);
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn airtimes() {
        let top80 = PhyMode::new(Mcs::MAX, Width::Mhz80, 2);
        assert_eq!(frame_airtime(0, top80).unwrap(), PHY_PREAMBLE);
        let full = frame_airtime(MAX_AMPDU_BYTES, top80).unwrap() - PHY_PREAMBLE;
        let ideal = SimTime::from_micros(437);
        let diff = full.as_nanos().abs_diff(ideal.as_nanos());
        assert!(diff <= OFDM_SYMBOL.as_nanos(), "{full}");
        assert_eq!(
            frame_airtime(MAX_AMPDU_BYTES + 1, top80),
            Err(PhyError::OversizePayload(65_536))
        );
    }

    #[test]
    fn airtime_doubles_within_a_symbol() {
        let mode = PhyMode::new(Mcs::MAX, Width::Mhz20, 2);
        for bytes in [1_500usize, 10_000, 30_000] {
            let single = (frame_airtime(bytes, mode).unwrap() - PHY_PREAMBLE).as_nanos();
            let double = (frame_airtime(2 * bytes, mode).unwrap() - PHY_PREAMBLE).as_nanos();
            assert!(double.abs_diff(2 * single) <= OFDM_SYMBOL.as_nanos());
        }
    }

    #[test]
    fn control_frames() {
        assert_eq!(control_airtime(RTS_BYTES), SimTime::from_micros(52));
        assert_eq!(control_airtime(CTS_BYTES), SimTime::from_micros(44));
        assert_eq!(control_airtime(BLOCK_ACK_BYTES), SimTime::from_micros(68));
    }

    #[test]
    fn spacing_relations() {
        assert_eq!(DIFS, SIFS + SLOT.times(2));
        assert_eq!(PIFS, SIFS + SLOT);
    }
}
