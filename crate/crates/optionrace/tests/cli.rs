//! End-to-end tests of the compiled binary: exit codes, stdout tables,
//! artifact files, config round-trips, and golden outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_optionrace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    bin().args(args).env(key, value).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

#[test]
fn help_exits_zero_and_names_every_command() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for needle in [
        "thresholds",
        "classify",
        "sweep",
        "simulate race",
        "simulate breakout",
        "simulate validate",
        "mechanism liability",
        "mechanism windfall",
        "mechanism warning-shot",
        "OPTIONRACE_THREADS",
        "config_resolved.json",
    ] {
        assert!(text.contains(needle), "usage text misses {needle:?}");
    }
}

#[test]
fn usage_problems_exit_one() {
    let out = run(&[]);
    assert_eq!(code(&out), 1);

    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown command"));

    let out = run(&["simulate"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("race | breakout | validate"));

    let out = run(&["thresholds", "--preset", "nonesuch"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown preset"));

    let out = run(&["thresholds", "--pi", "1.5"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("pi_self"));
}

#[test]
fn validate_needs_a_fixed_barrier_level() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["simulate", "validate", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--barrier LEVEL"));
}

#[test]
fn numerical_failures_exit_two_after_recording_the_config() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    // Zero rate and zero payout leave the discounted crossing undefined.
    let out = run(&[
        "simulate",
        "validate",
        "--barrier",
        "2",
        "--set",
        "params.r=0",
        "--set",
        "params.delta=0",
        "--paths",
        "50",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(out_dir.join("config_resolved.json").exists());
    assert!(!out_dir.join("validate.json").exists());
}

#[test]
fn failed_validation_exits_two_but_writes_its_report() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    // Noise-free drift with a 5-unit grid overshoots the crossing time by
    // years, so the estimate lands far outside the 1% band, deterministically.
    let out = run(&[
        "simulate",
        "validate",
        "--barrier",
        "2",
        "--sigma",
        "0",
        "--set",
        "params.delta=0.025",
        "--dt",
        "5",
        "--horizon",
        "50",
        "--paths",
        "50",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("tolerance"));
    let report = stdout(&out);
    assert!(report.contains("within_tolerance"));
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("validate.json"))).unwrap();
    assert_eq!(json["within_tolerance"], serde_json::Value::Bool(false));
}

#[test]
fn deterministic_validation_passes_and_exits_zero() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "simulate",
        "validate",
        "--barrier",
        "2",
        "--sigma",
        "0",
        "--set",
        "params.delta=0.025",
        "--paths",
        "50",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("validate.json"))).unwrap();
    assert_eq!(json["within_tolerance"], serde_json::Value::Bool(true));
    assert_eq!(json["beta1"], serde_json::json!(2.0));
    assert_eq!(json["target"], serde_json::json!(0.25));
}

#[test]
fn baseline_threshold_ladder_prints_the_known_values() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "thresholds",
        "--preset",
        "baseline",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("v_preempt                2\n"), "{text}");
    assert!(text.contains("v_survival               12\n"), "{text}");
    assert!(text.contains("v_nuclear                12\n"), "{text}");
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("thresholds.json"))).unwrap();
    assert_eq!(json["v_preempt"], serde_json::json!(2.0));
    assert_eq!(json["v_survival"], serde_json::json!(12.0));
}

#[test]
fn half_share_pushes_the_preemption_trigger_to_infinity() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "thresholds",
        "--preset",
        "baseline",
        "--share",
        "0.5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("v_preempt                inf"));
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("thresholds.json"))).unwrap();
    assert_eq!(json["v_preempt"], serde_json::json!("inf"));
}

#[test]
fn confident_asymmetric_beliefs_trigger_immediate_deployment() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "thresholds",
        "--pi-self",
        "0.6",
        "--pi-rival",
        "0.4",
        "--d-social",
        "10",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("0 (immediate deploy)"));
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("thresholds.json"))).unwrap();
    assert_eq!(json["v_saviour"], serde_json::json!(0.0));
    assert_eq!(json["immediate_deploy"], serde_json::Value::Bool(true));
}

#[test]
fn classify_places_the_baseline_demo_point_in_the_suicide_region() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "classify",
        "--preset",
        "baseline",
        "--value",
        "6",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("suicide_region"));
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("region.json"))).unwrap();
    assert_eq!(json["region"], serde_json::json!("suicide_region"));
    assert_eq!(json["value"], serde_json::json!(6.0));
}

#[test]
fn liability_demo_reports_both_modes_and_flags_the_short_rule() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "mechanism",
        "liability",
        "--preset",
        "liability-demo",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("excludes-private         numeric=6 share_rule=2 discrepancy=4"));
    assert!(text.contains("includes-private         numeric=18 share_rule=2 discrepancy=16"));
    let json: serde_json::Value =
        serde_json::from_slice(&read(&out_dir.join("liability.json"))).unwrap();
    assert_eq!(json["modes"][0]["d_private_numeric"], serde_json::json!(6.0));
    assert_eq!(json["modes"][1]["d_private_numeric"], serde_json::json!(18.0));
    assert_eq!(json["modes"][0]["d_private_share_rule"], serde_json::json!(2.0));
}

#[test]
fn windfall_command_prints_the_critical_share() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "mechanism",
        "windfall",
        "--preset",
        "baseline",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("critical_share           0.454545455"));
}

#[test]
fn config_resolved_reproduces_the_run_byte_for_byte() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let out = run(&[
        "simulate",
        "race",
        "--paths",
        "400",
        "--seed",
        "9",
        "--d-social",
        "25",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "simulate",
        "race",
        "--config",
        first.join("config_resolved.json").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    for name in ["config_resolved.json", "race.json", "race_paths.csv"] {
        assert_eq!(
            read(&first.join(name)),
            read(&second.join(name)),
            "{name} differs after round-trip"
        );
    }
}

#[test]
fn format_flag_limits_what_gets_written() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "simulate",
        "race",
        "--paths",
        "50",
        "--format",
        "json",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out_dir.join("race.json").exists());
    assert!(!out_dir.join("race_paths.csv").exists());

    let csv_dir = dir.path().join("csv");
    let out = run(&[
        "sweep",
        "--format",
        "csv",
        "--out",
        csv_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(csv_dir.join("sweep.csv").exists());
    assert!(!csv_dir.join("sweep.svg").exists());
}

#[test]
fn figure1_sweep_matches_the_committed_goldens() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "sweep",
        "--preset",
        "figure1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        read(&out_dir.join("sweep.csv")),
        read(&golden("figure1_sweep.csv")),
        "sweep.csv drifted from the golden copy"
    );
    assert_eq!(
        read(&out_dir.join("sweep.svg")),
        read(&golden("figure1_sweep.svg")),
        "sweep.svg drifted from the golden copy"
    );
}

#[test]
fn thread_count_changes_nothing_about_the_files() {
    let dir = tempdir().unwrap();
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    for (out_dir, threads) in [(&one, "1"), (&four, "4")] {
        let out = run_with_env(
            &[
                "simulate",
                "race",
                "--paths",
                "400",
                "--out",
                out_dir.to_str().unwrap(),
            ],
            "OPTIONRACE_THREADS",
            threads,
        );
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }
    for name in ["config_resolved.json", "race.json", "race_paths.csv"] {
        assert_eq!(read(&one.join(name)), read(&four.join(name)), "{name}");
    }

    let out = run_with_env(&["thresholds"], "OPTIONRACE_THREADS", "zero");
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("OPTIONRACE_THREADS"));
}

#[test]
fn zero_epsilon_breakout_reproduces_the_survival_race() {
    let dir = tempdir().unwrap();
    let bo = dir.path().join("bo");
    let sr = dir.path().join("sr");
    let out = run(&[
        "simulate",
        "breakout",
        "--epsilon",
        "0",
        "--paths",
        "400",
        "--out",
        bo.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "simulate",
        "race",
        "--barrier",
        "survival",
        "--paths",
        "400",
        "--out",
        sr.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let bo_json: serde_json::Value =
        serde_json::from_slice(&read(&bo.join("breakout.json"))).unwrap();
    let sr_json: serde_json::Value = serde_json::from_slice(&read(&sr.join("race.json"))).unwrap();
    assert_eq!(bo_json["stats"], sr_json["stats"]);

    let race_rows = String::from_utf8(read(&sr.join("race_paths.csv"))).unwrap();
    let bo_rows = String::from_utf8(read(&bo.join("breakout_paths.csv"))).unwrap();
    let race_rows: Vec<&str> = race_rows.lines().skip(1).collect();
    let bo_rows: Vec<&str> = bo_rows.lines().skip(1).collect();
    assert_eq!(race_rows.len(), bo_rows.len());
    for (r, b) in race_rows.iter().zip(&bo_rows) {
        assert!(b.starts_with(&format!("{r},")), "race {r:?} vs breakout {b:?}");
    }
}

#[test]
fn expert_survey_preset_sweeps_the_safety_belief_axis() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "sweep",
        "--preset",
        "expert-survey",
        "--format",
        "csv",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(read(&out_dir.join("sweep.csv"))).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("pi,value,"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.8");
    let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    assert_eq!(last[0], "0.95");
}
