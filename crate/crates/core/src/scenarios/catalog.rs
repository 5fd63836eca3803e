use super::{BssConfig, ScenarioError, ScenarioSpec, TrafficConfig};
use crate::engine::{Purpose, RngStream, StreamId};
use crate::mac::BondingMode;
use crate::traffic::IntervalSchedule;

pub const SCENARIO_NAMES: [&str; 7] = [
    "sp1",
    "sp2",
    "mp1",
    "mp2",
    "mp3",
    "baseline-sweep",
    "tuning-deployment",
];

/// One-line descriptions for `list-scenarios`.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "sp1" => {
            "one learning BSS, legacy BSSs on #6:{3,4} and #1:{1}, channel 2 free; full buffer"
        }
        "sp2" => "one learning BSS vs four legacy 20 MHz BSSs with a 4 x 15 s load schedule",
        "mp1" => "three learning BSSs, full buffer",
        "mp2" => "four learning BSSs, two full buffer and two at 20-40 % load",
        "mp3" => "two learning and two legacy 80 MHz BSSs, loads 60-90 %",
        "baseline-sweep" => "sp1 with the learning BSS pinned to each of the 7 allocations",
        "tuning-deployment" => "one learning AP and 1-3 random legacy APs, 1-8 s",
        _ => return None,
    })
}

const FULL: TrafficConfig = TrafficConfig::FullBuffer;

fn base(name: &str, bss: Vec<BssConfig>) -> ScenarioSpec {
    ScenarioSpec {
        name: name.to_string(),
        bonding: BondingMode::Scb,
        duration_s: 60.0,
        trials: 20,
        burn_in_s: 2.0,
        area: [10.0, 10.0, 2.0],
        baseline_channel: 7,
        intervals: None,
        bss,
    }
}

pub fn sp1() -> ScenarioSpec {
    let mut s = base(
        "sp1",
        vec![
            BssConfig::learning(FULL),
            BssConfig::legacy(6, FULL),
            BssConfig::legacy(1, FULL),
        ],
    );
    s.baseline_channel = 2;
    s
}

pub fn sp2() -> ScenarioSpec {
    let mut bss = vec![BssConfig::learning(FULL)];
    for ch in 1..=4 {
        bss.push(BssConfig::legacy(ch, TrafficConfig::Random { load: [0.8, 0.9] }).scheduled());
    }
    let mut s = base("sp2", bss);
    s.baseline_channel = 1;
    s.intervals = Some(IntervalSchedule {
        length_s: 15.0,
        count: 4,
        high: [0.8, 0.9],
        low: [0.1, 0.2],
    });
    s
}

pub fn mp1() -> ScenarioSpec {
    base("mp1", vec![BssConfig::learning(FULL); 3])
}

pub fn mp2() -> ScenarioSpec {
    let low = BssConfig::learning(TrafficConfig::Random { load: [0.2, 0.4] }).with_reference(40);
    base(
        "mp2",
        vec![
            BssConfig::learning(FULL),
            BssConfig::learning(FULL),
            low.clone(),
            low,
        ],
    )
}

pub fn mp3() -> ScenarioSpec {
    let load = TrafficConfig::Random { load: [0.6, 0.9] };
    base(
        "mp3",
        vec![
            BssConfig::learning(load).with_reference(40),
            BssConfig::learning(load).with_reference(40),
            BssConfig::legacy(7, load).with_reference(40),
            BssConfig::legacy(7, load).with_reference(40),
        ],
    )
}

pub const TUNING_DURATIONS_S: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// A random deployment for hyperparameter search: one learning AP plus
/// `bss_count - 1` legacy APs on random allocations; traffic family and load
/// drawn per AP.
pub fn tuning_deployment(seed: u64, bss_count: usize, duration_s: f64) -> ScenarioSpec {
    let mut rng = RngStream::new(seed, StreamId::new(0, u32::MAX, Purpose::Schedule));
    let traffic = |rng: &mut RngStream| match rng.below(4) {
        0 => TrafficConfig::FullBuffer,
        1 => TrafficConfig::Poisson { load: [0.1, 0.9] },
        2 => TrafficConfig::Bursty { load: [0.1, 0.9] },
        _ => TrafficConfig::Vr { load: [0.1, 0.9] },
    };
    let mut bss = vec![BssConfig::learning(traffic(&mut rng))];
    for _ in 1..bss_count {
        let channel = 1 + rng.below(7) as u8;
        bss.push(BssConfig::legacy(channel, traffic(&mut rng)));
    }
    let mut s = base("tuning-deployment", bss);
    s.duration_s = duration_s;
    s.trials = 1;
    s.burn_in_s = 0.0;
    s
}

/// Catalog lookup. The seed only matters for randomized deployments.
pub fn build_scenario(name: &str, seed: u64) -> Result<ScenarioSpec, ScenarioError> {
    match name.to_ascii_lowercase().as_str() {
        "sp1" | "baseline-sweep" => {
            let mut s = sp1();
            if name.eq_ignore_ascii_case("baseline-sweep") {
                s.name = "baseline-sweep".into();
            }
            Ok(s)
        }
        "sp2" => Ok(sp2()),
        "mp1" => Ok(mp1()),
        "mp2" => Ok(mp2()),
        "mp3" => Ok(mp3()),
        "tuning-deployment" => {
            let mut rng = RngStream::new(seed, StreamId::new(0, u32::MAX - 1, Purpose::Schedule));
            let count = 2 + rng.below(3) as usize;
            let duration = TUNING_DURATIONS_S[rng.below(4) as usize];
            Ok(tuning_deployment(seed, count, duration))
        }
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}
