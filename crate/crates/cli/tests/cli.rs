use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wifimab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wifimab"))
        .args(args)
        .env("WIFIMAB_OUT_DIR", out)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

const SP1_SHORT: [&str; 8] = [
    "run",
    "--scenario",
    "sp1",
    "--duration",
    "2.5",
    "--seed",
    "7",
    "--decision-log",
];

#[test]
fn run_writes_one_file_per_trial_and_a_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = SP1_SHORT.to_vec();
    args.extend(["--algo", "linucb", "--arch", "ma", "--trials", "20"]);
    let out = wifimab(&args, tmp.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let names: Vec<String> = files(&tmp.path().join("sp1/ma-linucb"))
        .into_iter()
        .map(|f| f.0)
        .collect();
    assert_eq!(names.iter().filter(|n| n.starts_with("trial-")).count(), 20);
    assert_eq!(
        names.iter().filter(|n| n.starts_with("decisions-")).count(),
        20
    );
    assert!(names.contains(&"summary.jsonl".to_string()));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("jain"), "{stdout}");
}

#[test]
fn rerun_and_sequential_run_give_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let mut args = SP1_SHORT.to_vec();
    args.extend(["--algo", "ucb", "--arch", "sa", "--trials", "4", "--trace"]);
    assert!(wifimab(&args, a.path()).status.success());
    assert!(wifimab(&args, b.path()).status.success());
    args.push("--sequential");
    assert!(wifimab(&args, c.path()).status.success());
    let fa = files(&a.path().join("sp1/sa-ucb"));
    assert_eq!(fa.len(), 4 * 3 + 1);
    assert_eq!(fa, files(&b.path().join("sp1/sa-ucb")));
    assert_eq!(fa, files(&c.path().join("sp1/sa-ucb")));
}

#[test]
fn baseline_run_carries_no_agent_state() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = SP1_SHORT.to_vec();
    args.extend(["--algo", "none", "--channel", "2", "--trials", "2"]);
    let out = wifimab(&args, tmp.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = files(&tmp.path().join("sp1/static-2"));
    assert!(run.iter().all(|(n, _)| !n.starts_with("decisions-")));
    for (name, body) in run.iter().filter(|(n, _)| n.starts_with("trial-")) {
        let text = String::from_utf8_lossy(body);
        assert!(!text.contains("selection"), "{name}");
        assert!(text.contains("\"channel\":2"), "{name}");
    }
}

#[test]
fn config_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        vec!["run", "--scenario", "sp9"],
        vec!["run", "--scenario", "sp1", "--trials", "0"],
        vec![
            "run",
            "--scenario",
            "sp1",
            "--algo",
            "none",
            "--channel",
            "9",
        ],
        vec![
            "run",
            "--scenario",
            "sp1",
            "--algo",
            "none",
            "--channel",
            "6",
            "--primary",
            "1",
        ],
        vec!["run", "--scenario", "sp1", "--channel", "2"],
        vec!["run", "--scenario", "missing.toml"],
        vec!["run", "--scenario", "sp1", "--duration", "1"],
        vec!["run", "--bogus"],
        vec!["export", "/nonexistent/results"],
    ] {
        let out = wifimab(&args, tmp.path());
        assert_eq!(
            out.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
    assert!(fs::read_dir(tmp.path()).unwrap().next().is_none());
}

#[test]
fn runtime_failure_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("occupied");
    fs::write(&blocker, "not a directory").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wifimab"))
        .args([
            "run",
            "--scenario",
            "sp1",
            "--duration",
            "2.2",
            "--trials",
            "1",
            "--algo",
            "none",
            "--out",
        ])
        .arg(&blocker)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_file_scenarios_run() {
    let tmp = tempfile::tempdir().unwrap();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/mp1.toml");
    let out = wifimab(
        &[
            "run",
            "--scenario",
            path.to_str().unwrap(),
            "--duration",
            "2.2",
            "--trials",
            "1",
            "--algo",
            "none",
        ],
        tmp.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(tmp.path().join("mp1/static-7/trial-000.jsonl").is_file());
}

#[test]
fn export_builds_tables_and_flags_representatives() {
    let tmp = tempfile::tempdir().unwrap();
    for algo in ["ucb", "none"] {
        let mut args = SP1_SHORT.to_vec();
        args.extend(["--algo", algo, "--trials", "3"]);
        assert!(wifimab(&args, tmp.path()).status.success());
    }
    let tables = tmp.path().join("tables");
    let out = wifimab(
        &[
            "export",
            tmp.path().to_str().unwrap(),
            "--representative",
            "jain",
            "--out",
            tables.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let goodput = fs::read_to_string(tables.join("sp1-goodput.csv")).unwrap();
    // Header plus 3 BSSs for each of 3 trials and 2 methods.
    assert_eq!(goodput.lines().count(), 1 + 3 * 3 * 2);
    assert!(goodput.lines().next().unwrap().ends_with(",jain"));
    let reps = fs::read_to_string(tables.join("representative-jain.csv")).unwrap();
    assert_eq!(reps.lines().count(), 3);
}

#[test]
fn tune_writes_a_ranked_leaderboard() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wifimab(
        &[
            "tune",
            "--algo",
            "linucb",
            "--arch",
            "ma",
            "--candidates",
            "6",
            "--bss-counts",
            "2",
            "--durations",
            "0.3,0.6",
        ],
        tmp.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("best alpha"));
    let board = fs::read_to_string(tmp.path().join("tune/ma-linucb-leaderboard.csv")).unwrap();
    let rewards: Vec<f64> = board
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rewards.len(), 6);
    assert!(rewards.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn list_scenarios_names_the_catalog() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wifimab(&["list-scenarios"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in [
        "sp1",
        "sp2",
        "mp1",
        "mp2",
        "mp3",
        "baseline-sweep",
        "tuning-deployment",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
