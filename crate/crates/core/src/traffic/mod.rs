//! Downlink traffic generators and load resolution.

mod schedule;

pub use schedule::{apply_interval_schedule, draw_underloaded, IntervalSchedule};

use serde::{Deserialize, Serialize};

use crate::engine::{RngStream, SimTime};
use crate::mac::PACKET_BYTES;
use crate::phy::{
    control_airtime, frame_airtime, Mcs, PhyMode, Width, BLOCK_ACK_BYTES, CTS_BYTES, DIFS,
    MAX_AMPDU_BYTES, RTS_BYTES, SIFS, SLOT, SPATIAL_STREAMS,
};

/// Probability that one MPDU is lost.
pub const PACKET_ERROR_RATE: f64 = 0.1;
pub const BURST_PACKETS: u32 = 64;
pub const VR_FPS: f64 = 90.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrafficKind {
    FullBuffer,
    Poisson,
    Bursty,
    Vr,
}

impl TrafficKind {
    /// Non-saturated kinds, in the order used for random assignment.
    pub const VARIABLE: [TrafficKind; 3] =
        [TrafficKind::Poisson, TrafficKind::Bursty, TrafficKind::Vr];
}

/// A generator with concrete parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrafficModel {
    FullBuffer,
    Poisson {
        /// Mean inter-packet time in seconds.
        mean_interval_s: f64,
    },
    Bursty {
        mean_interval_s: f64,
        burst: u32,
    },
    Vr {
        fps: f64,
        bytes_per_frame: u64,
    },
}

impl TrafficModel {
    /// Generator of `kind` offering `rate_bps` on average.
    pub fn from_rate(kind: TrafficKind, rate_bps: f64) -> TrafficModel {
        assert!(rate_bps > 0.0, "offered rate must be positive");
        let packet_bits = f64::from(PACKET_BYTES) * 8.0;
        match kind {
            TrafficKind::FullBuffer => TrafficModel::FullBuffer,
            TrafficKind::Poisson => TrafficModel::Poisson {
                mean_interval_s: packet_bits / rate_bps,
            },
            TrafficKind::Bursty => TrafficModel::Bursty {
                mean_interval_s: packet_bits * f64::from(BURST_PACKETS) / rate_bps,
                burst: BURST_PACKETS,
            },
            TrafficKind::Vr => TrafficModel::Vr {
                fps: VR_FPS,
                bytes_per_frame: (rate_bps / 8.0 / VR_FPS).round().max(1.0) as u64,
            },
        }
    }

    pub fn kind(&self) -> TrafficKind {
        match self {
            TrafficModel::FullBuffer => TrafficKind::FullBuffer,
            TrafficModel::Poisson { .. } => TrafficKind::Poisson,
            TrafficModel::Bursty { .. } => TrafficKind::Bursty,
            TrafficModel::Vr { .. } => TrafficKind::Vr,
        }
    }

    /// Mean offered rate in bit/s; infinite for a saturated source.
    pub fn offered_bps(&self) -> f64 {
        let packet_bits = f64::from(PACKET_BYTES) * 8.0;
        match *self {
            TrafficModel::FullBuffer => f64::INFINITY,
            TrafficModel::Poisson { mean_interval_s } => packet_bits / mean_interval_s,
            TrafficModel::Bursty {
                mean_interval_s,
                burst,
            } => packet_bits * f64::from(burst) / mean_interval_s,
            TrafficModel::Vr {
                fps,
                bytes_per_frame,
            } => fps * bytes_per_frame as f64 * 8.0,
        }
    }

    /// Sizes of the packets delivered by one arrival. A VR frame is cut
    /// into full-size packets plus one carrying the remainder.
    pub fn arrival_sizes(&self) -> impl Iterator<Item = u32> {
        let (count, last) = match *self {
            TrafficModel::FullBuffer => (0, 0),
            TrafficModel::Poisson { .. } => (1, PACKET_BYTES),
            TrafficModel::Bursty { burst, .. } => (burst, PACKET_BYTES),
            TrafficModel::Vr {
                bytes_per_frame, ..
            } => {
                let n = vr_packets(bytes_per_frame);
                let rem = (bytes_per_frame % u64::from(PACKET_BYTES)) as u32;
                (n, if rem == 0 { PACKET_BYTES } else { rem })
            }
        };
        (0..count).map(move |k| if k + 1 == count { last } else { PACKET_BYTES })
    }
}

fn vr_packets(bytes_per_frame: u64) -> u32 {
    bytes_per_frame.div_ceil(u64::from(PACKET_BYTES)) as u32
}

/// Time to the next arrival and how many packets it brings. Saturated
/// sources have no arrivals; their queue is refilled directly.
pub fn next_arrival(model: &TrafficModel, rng: &mut RngStream) -> Option<(SimTime, u32)> {
    match *model {
        TrafficModel::FullBuffer => None,
        TrafficModel::Poisson { mean_interval_s } => {
            Some((SimTime::from_secs_f64(rng.exponential(mean_interval_s)), 1))
        }
        TrafficModel::Bursty {
            mean_interval_s,
            burst,
        } => Some((
            SimTime::from_secs_f64(rng.exponential(mean_interval_s)),
            burst,
        )),
        TrafficModel::Vr {
            fps,
            bytes_per_frame,
        } => Some((
            SimTime::from_secs_f64(1.0 / fps),
            vr_packets(bytes_per_frame),
        )),
    }
}

/// Analytic saturation goodput of one AP alone on the medium: a maximal
/// A-MPDU per uncontended cycle (DIFS, mean backoff at CW 16, RTS/CTS, data,
/// BlockAck), discounted by the MPDU error rate.
pub fn max_theoretical_goodput(width: Width, mcs: Mcs, nss: u32) -> f64 {
    let mpdus = MAX_AMPDU_BYTES / PACKET_BYTES as usize;
    let bytes = mpdus * PACKET_BYTES as usize;
    let data = frame_airtime(bytes, PhyMode::new(mcs, width, nss)).expect("fits by construction");
    let mean_backoff_ns = SLOT.as_nanos() as f64 * f64::from(crate::mac::CW_MIN - 1) / 2.0;
    let cycle = DIFS
        + control_airtime(RTS_BYTES)
        + SIFS
        + control_airtime(CTS_BYTES)
        + SIFS
        + data
        + SIFS
        + control_airtime(BLOCK_ACK_BYTES);
    let secs = (cycle.as_nanos() as f64 + mean_backoff_ns) * 1e-9;
    bytes as f64 * 8.0 * (1.0 - PACKET_ERROR_RATE) / secs
}

/// Goodput reference for load fractions, at the top MCS with two streams.
pub fn reference_goodput(width: Width) -> f64 {
    max_theoretical_goodput(width, Mcs::MAX, SPATIAL_STREAMS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Purpose, StreamId};
    use crate::phy::phy_rate;

    fn rng() -> RngStream {
        RngStream::new(11, StreamId::new(0, 0, Purpose::Traffic))
    }

    #[test]
    fn goodput_bound_below_phy_rate_and_monotone() {
        let mut prev = 0.0;
        for w in [Width::Mhz20, Width::Mhz40, Width::Mhz80] {
            let g = max_theoretical_goodput(w, Mcs::MAX, 2);
            assert!(g < phy_rate(Mcs::MAX, w, 2));
            assert!(g > prev);
            prev = g;
        }
        let g20 = reference_goodput(Width::Mhz20) / 1e6;
        assert!((g20 - 214.35).abs() < 0.1, "{g20}");
    }

    #[test]
    fn vr_period_is_fixed() {
        let m = TrafficModel::from_rate(TrafficKind::Vr, 50e6);
        let mut r = rng();
        for _ in 0..100 {
            let (dt, n) = next_arrival(&m, &mut r).unwrap();
            assert_eq!(dt, SimTime::from_secs_f64(1.0 / 90.0));
            assert_eq!(n, 47);
        }
        let sizes: Vec<u32> = m.arrival_sizes().collect();
        assert_eq!(sizes.len(), 47);
        assert_eq!(sizes.iter().map(|&b| u64::from(b)).sum::<u64>(), 69_444);
    }

    #[test]
    fn poisson_mean_interval() {
        let m = TrafficModel::Poisson {
            mean_interval_s: 1e-3,
        };
        let mut r = rng();
        let n = 100_000;
        let total: f64 = (0..n)
            .map(|_| next_arrival(&m, &mut r).unwrap().0.as_secs_f64())
            .sum();
        let mean = total / n as f64;
        assert!((mean - 1e-3).abs() < 0.02e-3, "{mean}");
    }

    #[test]
    fn full_buffer_has_no_arrivals() {
        assert!(next_arrival(&TrafficModel::FullBuffer, &mut rng()).is_none());
        assert!(TrafficModel::FullBuffer.offered_bps().is_infinite());
    }

    #[test]
    fn offered_rate_matches_request() {
        for kind in TrafficKind::VARIABLE {
            for rate in [10e6, 100e6, 300e6] {
                let m = TrafficModel::from_rate(kind, rate);
                let rel = (m.offered_bps() - rate).abs() / rate;
                assert!(rel < 0.03, "{kind:?} {rate} {}", m.offered_bps());
            }
        }
    }
}
