use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use wifimab::scenarios::{build_scenario, BssConfig, ScenarioError, ScenarioSpec, TrafficConfig};

fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn checked_in_configs_match_catalog() {
    let mut seen = 0;
    for entry in fs::read_dir(config_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let spec = ScenarioSpec::from_toml(&text).unwrap();
        let name = path.file_stem().unwrap().to_str().unwrap();
        assert_eq!(spec, build_scenario(name, 0).unwrap(), "{}", path.display());
        seen += 1;
    }
    assert_eq!(seen, 6);
}

#[test]
fn unknown_keys_are_rejected() {
    let mut text = build_scenario("sp1", 0).unwrap().to_toml();
    text.insert_str(0, "colour = \"blue\"\n");
    assert!(matches!(
        ScenarioSpec::from_toml(&text),
        Err(ScenarioError::Config(_))
    ));
}

#[test]
fn legacy_without_channel_is_rejected() {
    let mut s = build_scenario("sp1", 0).unwrap();
    s.bss[1].channel = None;
    assert!(matches!(
        ScenarioSpec::from_toml(&s.to_toml()),
        Err(ScenarioError::Invalid(_))
    ));
}

fn traffic() -> impl Strategy<Value = TrafficConfig> {
    let load = (0.05f64..0.5, 0.0f64..0.5).prop_map(|(lo, d)| [lo, lo + d]);
    prop_oneof![
        Just(TrafficConfig::FullBuffer),
        load.clone()
            .prop_map(|load| TrafficConfig::Poisson { load }),
        load.clone().prop_map(|load| TrafficConfig::Bursty { load }),
        load.clone().prop_map(|load| TrafficConfig::Vr { load }),
        load.prop_map(|load| TrafficConfig::Random { load }),
    ]
}

fn bss() -> impl Strategy<Value = BssConfig> {
    (
        proptest::option::of(1u8..=7),
        traffic(),
        proptest::option::of(0.0f64..10.0),
    )
        .prop_map(|(channel, t, x)| {
            let mut b = match channel {
                Some(c) => BssConfig::legacy(c, t),
                None => BssConfig::learning(t),
            };
            b.ap = x.map(|x| [x, 1.5, 1.0]);
            b
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn toml_round_trip_is_identity(
        bss in proptest::collection::vec(bss(), 1..5),
        duration in 1.0f64..120.0,
        trials in 1u32..50,
        baseline in 1u8..=7,
    ) {
        let mut spec = build_scenario("mp1", 0).unwrap();
        spec.name = "random".into();
        spec.bss = bss;
        spec.duration_s = duration;
        spec.burn_in_s = duration / 4.0;
        spec.trials = trials;
        spec.baseline_channel = baseline;
        let once = ScenarioSpec::from_toml(&spec.to_toml()).unwrap();
        prop_assert_eq!(&once, &spec);
        let twice = ScenarioSpec::from_toml(&once.to_toml()).unwrap();
        prop_assert_eq!(twice, once);
    }
}
