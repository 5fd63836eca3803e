use serde::{Deserialize, Serialize};

use crate::engine::{RngStream, SimTime};

/// Periodic re-draw of load fractions: every member runs in the `high`
/// range except one under-loaded member per interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalSchedule {
    pub length_s: f64,
    pub count: usize,
    pub high: [f64; 2],
    pub low: [f64; 2],
}

impl IntervalSchedule {
    pub fn length(&self) -> SimTime {
        SimTime::from_secs_f64(self.length_s)
    }

    /// Start time of interval `k`.
    pub fn boundary(&self, k: usize) -> SimTime {
        SimTime::from_secs_f64(self.length_s * k as f64)
    }

    /// Index of the interval containing `t`, saturating at the last one.
    pub fn interval_of(&self, t: SimTime) -> usize {
        ((t.as_nanos() / self.length().as_nanos().max(1)) as usize)
            .min(self.count.saturating_sub(1))
    }
}

/// Which member is under-loaded in each interval. The first intervals pick
/// distinct members; once the distinct picks run out (or only the final
/// interval is left) an earlier pick is repeated.
pub fn draw_underloaded(members: usize, intervals: usize, rng: &mut RngStream) -> Vec<usize> {
    assert!(members > 0);
    let distinct = intervals.saturating_sub(1).clamp(1, members).min(intervals);
    let mut pool: Vec<usize> = (0..members).collect();
    let mut picks = Vec::with_capacity(intervals);
    for _ in 0..distinct {
        let i = rng.below(pool.len() as u64) as usize;
        picks.push(pool.remove(i));
    }
    while picks.len() < intervals {
        let i = rng.below(distinct as u64) as usize;
        picks.push(picks[i]);
    }
    picks
}

/// Load fractions of every member for interval `k`.
pub fn apply_interval_schedule(
    schedule: &IntervalSchedule,
    picks: &[usize],
    members: usize,
    k: usize,
    rng: &mut RngStream,
) -> Vec<f64> {
    (0..members)
        .map(|m| {
            let [lo, hi] = if picks[k] == m {
                schedule.low
            } else {
                schedule.high
            };
            rng.uniform_in(lo, hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Purpose, StreamId};

    fn sp2() -> IntervalSchedule {
        IntervalSchedule {
            length_s: 15.0,
            count: 4,
            high: [0.8, 0.9],
            low: [0.1, 0.2],
        }
    }

    #[test]
    fn picks_satisfy_constraints_for_many_seeds() {
        for seed in 0..1000 {
            let mut rng = RngStream::new(seed, StreamId::new(0, 0, Purpose::Schedule));
            let picks = draw_underloaded(4, 4, &mut rng);
            assert_eq!(picks.len(), 4);
            assert!(picks[0] != picks[1] && picks[1] != picks[2] && picks[0] != picks[2]);
            assert!(picks[..3].contains(&picks[3]));
            let s = sp2();
            for k in 0..4 {
                let loads = apply_interval_schedule(&s, &picks, 4, k, &mut rng);
                for (m, f) in loads.iter().enumerate() {
                    let [lo, hi] = if m == picks[k] { s.low } else { s.high };
                    assert!((lo..hi).contains(f));
                }
            }
        }
    }

    #[test]
    fn boundaries() {
        let s = sp2();
        assert_eq!(s.boundary(1), SimTime::from_secs(15));
        assert_eq!(s.boundary(3), SimTime::from_secs(45));
        assert_eq!(s.interval_of(SimTime::from_secs(15)), 1);
        assert_eq!(s.interval_of(SimTime::from_secs(60)), 3);
    }
}
