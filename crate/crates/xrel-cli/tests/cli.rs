//! End-to-end tests against the built binary.

use std::path::Path;
use std::process::{Command, Output};

fn xrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xrel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_emits_nine_families() {
    let out = xrel(&["--curve", "0,-1,0", "--coeffs", "1,1,2", "classify"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["families"].as_array().unwrap().len(), 9);
    assert!(v["families"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f["verified"] == serde_json::json!(true)));
}

#[test]
fn zero_coefficient_exits_two() {
    let out = xrel(&["--curve", "0,-1,0", "--coeffs", "1,0,2", "classify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_curve_exits_two() {
    let out = xrel(&["--curve", "0,0,0", "--coeffs", "1,1,1", "classify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_torsion_job() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.toml");
    std::fs::write(
        &config,
        r#"
curve = ["0", "-1", "0"]
coeffs = ["1", "1", "2"]
box_n = 0

[subgroup]
generators = []
torsion = ["inf", ["0", "0"], ["1", "0"], ["-1", "0"]]
"#,
    )
    .unwrap();
    let csv = dir.path().join("summary.csv");
    let out = xrel(&[
        "--config",
        config.to_str().unwrap(),
        "search",
        "--summary-csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "five records plus the summary line");
    let summary: serde_json::Value = serde_json::from_str(lines[5]).unwrap();
    assert_eq!(summary["summary"]["total"], serde_json::json!(5));
    assert_eq!(summary["summary"]["sporadic"], serde_json::json!(0));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.contains("0,3,0,5,5,0"));
}

#[test]
fn search_output_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.toml");
    std::fs::write(
        &config,
        r#"
curve = ["0", "-1", "1/4"]
coeffs = ["1", "1", "1"]
box_n = 6

[subgroup]
generators = [["0", "1/2"]]
torsion = ["inf"]
"#,
    )
    .unwrap();
    let run = |threads: &str| {
        let out = xrel(&[
            "--config",
            config.to_str().unwrap(),
            "--threads",
            threads,
            "search",
        ]);
        assert!(out.status.success());
        stdout(&out)
    };
    let single = run("1");
    assert_eq!(single, run("1"), "identical runs are byte-identical");
    assert_eq!(single, run("4"), "thread count does not leak into output");
}

#[test]
fn verify_reports_all_passed() {
    let out = xrel(&["--curve", "1,-3,1", "--coeffs", "2,1,1", "verify"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_passed"], serde_json::json!(true));
    assert_eq!(v["results"].as_array().unwrap().len(), 7);
}

#[test]
fn wp_evaluates_half_period() {
    let out = xrel(&[
        "--curve",
        "0,-1,0",
        "--coeffs",
        "1,1,1",
        "wp",
        "--z",
        "1.3110287771460598,0",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let omega1 = v["omega1"].as_str().unwrap();
    let re: f64 = omega1.split(',').next().unwrap().parse().unwrap();
    assert!((re - 2.6220575542921198).abs() < 1e-9);
    let wp = v["wp"].as_str().unwrap();
    let wp_re: f64 = wp.split(',').next().unwrap().parse().unwrap();
    assert!((wp_re - 1.0).abs() < 1e-8);
}

#[test]
fn oracle_subcommands() {
    let out = xrel(&["oracle", "lemma2", "--max-order", "32"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["counterexamples"], serde_json::json!(0));

    let out = xrel(&[
        "--curve",
        "3,2,0",
        "--coeffs",
        "1,1,1",
        "oracle",
        "caseb-constant",
        "--const-slot",
        "3",
        "--unit",
        "1*sqrt(-1)",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["x_r"], serde_json::json!("2"));
    assert_eq!(v["verified"], serde_json::json!(true));
}

#[test]
fn config_echo_round_trips(){
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.toml");
    std::fs::write(
        &config,
        r#"
d = 1
curve = ["0", "-1", "0"]
coeffs = ["1", "1", "2"]
box_n = 3

[subgroup]
generators = []
torsion = ["inf", ["0", "0"]]
"#,
    )
    .unwrap();
    let first = stdout(&xrel(&["--config", config.to_str().unwrap(), "config"]));
    let echoed = dir.path().join("echo.toml");
    std::fs::write(&echoed, &first).unwrap();
    let second = stdout(&xrel(&["--config", echoed.to_str().unwrap(), "config"]));
    assert_eq!(first, second, "emit → parse → emit is idempotent");
    assert!(Path::new(&config).exists());
}

#[test]
fn cm_policy_none_disables_extra_units() {
    let out = xrel(&[
        "--curve", "0,-1,0",
        "--coeffs", "1,1,2",
        "--cm", "none",
        "classify",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["families"].as_array().unwrap().len(), 3);
}

#[test]
fn search_without_subgroup_is_a_config_error() {
    let out = xrel(&["--curve", "0,-1,0", "--coeffs", "1,1,2", "search"]);
    assert_eq!(out.status.code(), Some(2));
}
