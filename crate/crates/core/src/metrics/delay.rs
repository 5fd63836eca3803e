use serde::{Deserialize, Serialize};

use crate::engine::SimTime;

const BASE_NS: f64 = 1_000.0;
const RATIO_LN: f64 = 0.009_950_330_853_168_083; // ln(1.01)

/// Log-binned delay distribution: bins grow by 1 % from 1 µs, so quantiles
/// carry at most ~0.5 % relative error while memory stays bounded.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DelayHistogram {
    bins: Vec<u64>,
    count: u64,
    sum_ns: u128,
    min_ns: u64,
    max_ns: u64,
}

fn bin_of(ns: u64) -> usize {
    if (ns as f64) < BASE_NS {
        0
    } else {
        ((ns as f64 / BASE_NS).ln() / RATIO_LN).floor() as usize + 1
    }
}

fn bin_mid(bin: usize) -> f64 {
    if bin == 0 {
        BASE_NS / 2.0
    } else {
        BASE_NS * ((bin as f64 - 0.5) * RATIO_LN).exp()
    }
}

impl DelayHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, delay: SimTime) {
        let ns = delay.as_nanos();
        let b = bin_of(ns);
        if self.bins.len() <= b {
            self.bins.resize(b + 1, 0);
        }
        self.bins[b] += 1;
        if self.count == 0 {
            self.min_ns = ns;
            self.max_ns = ns;
        } else {
            self.min_ns = self.min_ns.min(ns);
            self.max_ns = self.max_ns.max(ns);
        }
        self.count += 1;
        self.sum_ns += u128::from(ns);
    }

    pub fn merge(&mut self, other: &DelayHistogram) {
        if other.count == 0 {
            return;
        }
        if self.bins.len() < other.bins.len() {
            self.bins.resize(other.bins.len(), 0);
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        if self.count == 0 {
            self.min_ns = other.min_ns;
            self.max_ns = other.max_ns;
        } else {
            self.min_ns = self.min_ns.min(other.min_ns);
            self.max_ns = self.max_ns.max(other.max_ns);
        }
        self.count += other.count;
        self.sum_ns += other.sum_ns;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean_ms(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum_ns as f64 / self.count as f64 / 1e6)
    }

    /// Nearest-rank quantile in milliseconds.
    pub fn quantile_ms(&self, p: f64) -> Option<f64> {
        if self.count == 0 {
            return None;
        }
        let rank = ((p / 100.0) * self.count as f64).ceil().max(1.0) as u64;
        let mut seen = 0;
        for (b, &c) in self.bins.iter().enumerate() {
            seen += c;
            if seen >= rank {
                let v = bin_mid(b).clamp(self.min_ns as f64, self.max_ns as f64);
                return Some(v / 1e6);
            }
        }
        Some(self.max_ns as f64 / 1e6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::percentile;

    #[test]
    fn quantiles_track_exact_values() {
        let mut h = DelayHistogram::new();
        let mut exact = Vec::new();
        for k in 1..=5000u64 {
            let ns = (k * k * 37) % 90_000_000 + 2_000;
            h.record(SimTime::from_nanos(ns));
            exact.push(ns as f64 / 1e6);
        }
        exact.sort_by(f64::total_cmp);
        for p in [25.0, 50.0, 75.0] {
            let got = h.quantile_ms(p).unwrap();
            let want = percentile(&exact, p).unwrap();
            assert!((got - want).abs() / want < 0.006, "p{p}: {got} vs {want}");
        }
        let mean = exact.iter().sum::<f64>() / exact.len() as f64;
        assert!((h.mean_ms().unwrap() - mean).abs() < 1e-9);
    }

    #[test]
    fn merge_equals_joint_recording() {
        let mut a = DelayHistogram::new();
        let mut b = DelayHistogram::new();
        let mut all = DelayHistogram::new();
        for k in 0..300u64 {
            let d = SimTime::from_micros(k * 13 + 5);
            if k % 3 == 0 {
                a.record(d)
            } else {
                b.record(d)
            }
            all.record(d);
        }
        a.merge(&b);
        assert_eq!(a, all);
    }

    #[test]
    fn empty_histogram() {
        assert_eq!(DelayHistogram::new().quantile_ms(50.0), None);
        assert_eq!(DelayHistogram::new().mean_ms(), None);
    }
}
