//! End-to-end tests of the command-line front end: exit codes, artifact
//! shapes, determinism, and config precedence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curiosity-geom"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn occupancy_mode_on_the_swap_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "occupancy",
        "--mdp",
        fixture("swap.json").to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let csv = std::fs::read_to_string(out.join("occupancy_7.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "state,exact,empirical,augmented_marginal"
    );
    assert_eq!(csv.lines().count(), 3);
    // The swap chain splits time evenly between its two states.
    for line in csv.lines().skip(1) {
        let exact: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((exact - 0.5).abs() < 1e-12);
    }
}

#[test]
fn sweep_row_count_matches_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "sweep",
        "--config",
        fixture("sweep.toml").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let csv = std::fs::read_to_string(out.join("sweep_42.csv")).unwrap();
    // 2 orders x 3 weights x 4 states data rows plus the header.
    assert_eq!(csv.lines().count(), 1 + 2 * 3 * 4);
    assert!(csv.starts_with(
        "alpha,beta,state,probability,return_value,divergence_to_uniform,geodesic_residual\n"
    ));
    assert!(csv.ends_with('\n'));
    assert!(!csv.contains('\r'), "LF line endings only");
}

#[test]
fn identical_config_and_seed_give_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let output = run(&[
            "sweep",
            "--config",
            fixture("sweep.toml").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    let a = std::fs::read(out_a.join("sweep_42.csv")).unwrap();
    let b = std::fs::read(out_b.join("sweep_42.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_flag_overrides_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "sweep",
        "--config",
        fixture("sweep.toml").to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(out.join("sweep_9.csv").exists());
    assert!(!out.join("sweep_42.csv").exists());
}

#[test]
fn corrupted_transition_is_rejected_at_parse_time() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "occupancy",
        "--mdp",
        fixture("corrupt_transition.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let err = stderr(&output);
    assert!(err.contains("transition[0][0]"), "stderr: {err}");
    // Nothing may be written when validation fails.
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn missing_required_field_exits_with_usage_error() {
    let output = run(&["occupancy"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("mdp"));
}

#[test]
fn unknown_mode_exits_with_usage_error() {
    let output = run(&["meditate"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("unknown mode"));
}

#[test]
fn dpi_mode_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let config = dir.path().join("dpi.toml");
    std::fs::write(&config, "seed = 3\ntrials = 200\n").unwrap();
    let output = run(&[
        "dpi",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("dpi_3.json")).unwrap()).unwrap();
    assert_eq!(report["trials"], 200);
    assert_eq!(report["pass"], true);
    assert!(report["min_gap"].as_f64().unwrap() >= -1e-12);
    assert!(report["counterexample"]["gap"].as_f64().unwrap() < -1e-6);
}

#[test]
fn verify_only_filter_restricts_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "verify",
        "--only",
        "dpi",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("verify_5.json")).unwrap()).unwrap();
    let entries = report.as_array().unwrap();
    assert!(!entries.is_empty());
    for entry in entries {
        assert!(entry["name"].as_str().unwrap().contains("dpi"));
        assert_eq!(entry["pass"], true);
        for key in ["name", "claim", "residual", "tolerance", "pass"] {
            assert!(entry.get(key).is_some(), "missing field {key}");
        }
    }
}

#[test]
fn verify_unmatched_filter_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "verify",
        "--only",
        "nonexistent-check",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_mode_passes_on_the_bundled_swap_mdp_config() {
    // A config file pointing at the known-good fixture: the suite ignores
    // the MDP (checks are self-contained) but the config must parse and the
    // filtered run must succeed end to end.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let config = dir.path().join("verify.toml");
    std::fs::write(
        &config,
        format!(
            "seed = 11\nmdp = \"{}\"\nonly = \"count\"\n",
            fixture("swap.json").display()
        ),
    )
    .unwrap();
    let output = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("verify:"));
}

#[test]
fn verify_rejects_a_corrupted_bundled_mdp_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "verify",
        "--mdp",
        fixture("corrupt_transition.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("transition[0][0]"));
    assert!(!out.exists(), "suite must not run after a parse rejection");
}

#[test]
fn natgrad_teleport_benchmark_reaches_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "natgrad",
        "--reward",
        "1.0,0.7,0.2,0.0,0.5,0.9",
        "--seed",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let csv = std::fs::read_to_string(out.join("natgrad_2.csv")).unwrap();
    assert!(csv.starts_with("iteration,objective,grad_norm,step,entropy_of_occupancy\n"));
    // Objectives are monotone non-decreasing down the trace.
    let objectives: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(objectives.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(stdout(&output).contains("gap to oracle"));
}

#[test]
fn optima_mode_agrees_with_the_oracle_on_the_chain_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = run(&[
        "optima",
        "--mdp",
        fixture("chain4.json").to_str().unwrap(),
        "--alpha",
        "-1.0,0.0",
        "--beta",
        "0.5,2.0",
        "--seed",
        "13",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let csv = std::fs::read_to_string(out.join("optima_13.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 4);
}
