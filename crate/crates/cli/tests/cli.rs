use std::path::Path;
use std::process::Command;

fn epimc(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_epimc")).args(args).env_remove("RUST_BACKTRACE").output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).display().to_string()
}

#[test]
fn run_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (ok, stdout, stderr) = epimc(&[
        "run",
        "--game",
        "phantom_ttt",
        "--agent-a",
        "epimc",
        "--agent-b",
        "random",
        "--games",
        "4",
        "--budget",
        "iters:10",
        "--depth",
        "2",
        "--seed",
        "9",
        "--out",
        out,
    ]);
    assert!(ok, "{stderr}");
    assert!(stdout.contains("epimc:depth=2 vs random"), "{stdout}");
    let records = dir.path().join("phantom_ttt__epimc_depth_2__random__iters_10.jsonl");
    assert_eq!(std::fs::read_to_string(records).unwrap().lines().count(), 4);
    let table = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(table.lines().count(), 2);
}

#[test]
fn pass_through_flags_reach_only_their_agents() {
    let (ok, stdout, stderr) = epimc(&[
        "run",
        "--config",
        &config("rps.cfg"),
        "--agent-a",
        "ismcts",
        "--agent-b",
        "pimc",
        "--games",
        "2",
        "--budget",
        "iters:5",
        "--uct-c",
        "0.5",
        "--depth",
        "2",
    ]);
    assert!(ok, "{stderr}");
    assert!(stdout.starts_with("ismcts:uct_c=0.5 vs pimc on rps"), "{stdout}");
}

#[test]
fn fusion_reports_depth_counts() {
    let (ok, stdout, stderr) = epimc(&["fusion", "--game", "rps", "--depths", "1,2"]);
    assert!(ok, "{stderr}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["propositions"]["sf"], serde_json::json!([1, 0]));
    assert_eq!(v["propositions"]["zero_at_horizon"], true);

    let (ok, stdout, _) = epimc(&["fusion", "--config", &config("card_toy.cfg"), "--depths", "4", "--detail"]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["reports"][0]["sf"], 0);
}

#[test]
fn bad_input_is_rejected() {
    let (ok, _, stderr) = epimc(&["run", "--game", "go", "--games", "2"]);
    assert!(!ok && stderr.contains("unknown game"), "{stderr}");
    let (ok, _, stderr) = epimc(&["run", "--game", "rps", "--games", "3", "--budget", "iters:1"]);
    assert!(!ok && stderr.contains("even"), "{stderr}");
    let (ok, _, stderr) = epimc(&["run", "--game", "rps", "--agent-a", "oos", "--games", "2"]);
    assert!(!ok && stderr.contains("not available"), "{stderr}");
    let (ok, _, stderr) = epimc(&["fusion", "--game", "phantom_ttt"]);
    assert!(!ok && stderr.contains("exceeds"), "{stderr}");
}
