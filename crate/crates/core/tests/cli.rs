//! End-to-end checks of the tilecov binary: subcommand wiring, file
//! formats, and the verify exit-code contract (0 covering, 1 not, 2 error).

use std::process::{Command, Output, Stdio};

fn tilecov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilecov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn table_is_byte_stable_and_matches_rows() {
    let a = tilecov(&["table"]);
    let b = tilecov(&["table"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("2 3 0 10.38"));
    assert!(text.contains("2 3 2 8.68"));
    assert!(text.contains("3 3 5 32.79"));
    assert!(text.contains("4 3 6 82.27"));
    assert!(text.contains("5 5 6 8641.86"));
    assert_eq!(text.lines().count(), 33); // header + 32 rows
}

#[test]
fn bound_json_schema_and_baseline_routing() {
    let out = tilecov(&[
        "bound", "--m", "1000", "--t", "3", "--alpha", "2", "--k", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["coefficient"].as_f64().unwrap() - 8.68).abs() < 0.005);
    assert_eq!(v["mode"], "exact");
    assert!(v["gamma"]["num"].is_string());
    assert!(v["sufficient_n"].as_u64().unwrap() % 4 == 2); // core multiple of 4 + 2 augment

    let out = tilecov(&["bound", "--m", "10", "--t", "3", "--alpha", "2", "--k", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["coefficient"].as_f64().unwrap() - 10.38).abs() < 0.005);

    // t=1 is outside the bound domain: usage error, exit 2
    let out = tilecov(&["bound", "--m", "10", "--t", "1", "--alpha", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_subcommand() {
    let out = tilecov(&["gamma", "--alpha", "2", "--t", "3", "--k", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["gamma"]["num"], "17");
    assert_eq!(v["gamma"]["den"], "36");
}

#[test]
fn generate_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matrix.txt");
    let out = tilecov(&[
        "generate", "--m", "4", "--t", "2", "--alpha", "2", "--k", "1", "--n", "12",
        "--augment", "--seed", "5", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let verdict = tilecov(&["verify", "--input", path.to_str().unwrap(), "--t", "2"]);
    assert!(matches!(verdict.status.code(), Some(0) | Some(1)));

    // a matrix of all 1's is never 1-covering for alpha=2
    let bad = dir.path().join("ones.txt");
    std::fs::write(&bad, "2 3 2\n1 1 1\n1 1 1\n").unwrap();
    let verdict = tilecov(&["verify", "--input", bad.to_str().unwrap(), "--t", "1"]);
    assert_eq!(verdict.status.code(), Some(1));
    let naive = tilecov(&["verify", "--input", bad.to_str().unwrap(), "--t", "1", "--naive"]);
    assert_eq!(naive.status.code(), Some(1));

    // malformed input: exit 2
    let broken = dir.path().join("broken.txt");
    std::fs::write(&broken, "2 3\n1 1 1\n").unwrap();
    let verdict = tilecov(&["verify", "--input", broken.to_str().unwrap(), "--t", "1"]);
    assert_eq!(verdict.status.code(), Some(2));
}

#[test]
fn construct_then_verify_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("ca.txt");
    let log = dir.path().join("ca.json");
    let out = tilecov(&[
        "construct", "--m", "5", "--t", "2", "--alpha", "2", "--k", "1", "--seed", "1",
        "--output", matrix.to_str().unwrap(), "--log", log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict = tilecov(&["verify", "--input", matrix.to_str().unwrap(), "--t", "2"]);
    assert_eq!(verdict.status.code(), Some(0));

    let log_v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&log).unwrap()).unwrap();
    assert_eq!(log_v["seed"], 1);
    assert!(log_v["resample_count"].as_u64().is_some());
    assert!(log_v["final_n"].as_u64().is_some());
}

#[test]
fn montecarlo_gamma_csv_and_z() {
    let out = tilecov(&[
        "montecarlo", "gamma", "--alpha", "2", "--t", "3", "--k", "2",
        "--trials", "100000", "--seed", "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let data = text.lines().nth(1).unwrap();
    let z: f64 = data.rsplit(',').next().unwrap().parse().unwrap();
    assert!(z.abs() <= 4.0, "z={z}");
}

#[test]
fn montecarlo_work_bound_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_tilecov"))
        .args(["montecarlo", "enumerate", "--alpha", "2", "--t", "3", "--k", "2"])
        .env("TILECOV_WORK_BOUND", "10")
        .stderr(Stdio::piped())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("work bound"));

    let out = tilecov(&["montecarlo", "enumerate", "--alpha", "2", "--t", "3", "--k", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["gamma"]["num"], "17");
    assert_eq!(v["gamma"]["den"], "36");
}

#[test]
fn same_flags_same_output() {
    let a = tilecov(&["generate", "--m", "3", "--t", "2", "--alpha", "3", "--n", "9", "--seed", "7"]);
    let b = tilecov(&["generate", "--m", "3", "--t", "2", "--alpha", "3", "--n", "9", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}
