//! File outputs and the command-line front end.

use std::fs;
use std::path::Path;
use std::process::Command;

use dyadic_stiffness::commands::{
    cmd_run_experiment, cmd_run_trial, TrialRequest, MANIFEST_FILE, SUMMARY_FILE, TRIALS_FILE, TRIAL_LOG_FILE,
    TRIAL_RECORD_FILE,
};
use dyadic_stiffness::config::{parse_config, ExperimentConfig};
use dyadic_stiffness::experiment::{expand_grid, Axis};
use dyadic_stiffness::output::{sha256_hex, SUMMARY_HEADER, TRIALS_HEADER, TRIAL_LOG_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dyadic-stiffness"))
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn single_cell() -> ExperimentConfig {
    parse_config(
        r#"
        [factors]
        delays_s = [0.16]
        stiffness_levels = [120.0]
        axes = ["y"]
        trials_per_cell = 1
        "#,
    )
    .unwrap()
}

#[test]
fn default_config_writes_160_trials_and_48_summary_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::default();
    assert_eq!(expand_grid(&config.grid()).unwrap().len(), 160);
    let run = cmd_run_experiment(&config, dir.path(), None).unwrap();
    assert_eq!(run.n_failed(), 0);

    let (header, rows) = read_csv(&dir.path().join(TRIALS_FILE));
    assert_eq!(header, TRIALS_HEADER);
    assert_eq!(rows.len(), 160);
    assert!(rows.iter().all(|r| r[12] == "ok" && r[13].is_empty()));

    let (header, rows) = read_csv(&dir.path().join(SUMMARY_FILE));
    assert_eq!(header, SUMMARY_HEADER);
    assert_eq!(rows.len(), 48);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], 1);
    assert_eq!(manifest["n_trials"], 160);
    let trials_bytes = fs::read(dir.path().join(TRIALS_FILE)).unwrap();
    assert_eq!(manifest["files"][0]["sha256"], sha256_hex(&trials_bytes));
    assert_eq!(run.trials_sha256, sha256_hex(&trials_bytes));
}

#[test]
fn single_cell_gives_one_trial_and_three_summary_rows() {
    let dir = tempfile::tempdir().unwrap();
    let run = cmd_run_experiment(&single_cell(), dir.path(), Some(1)).unwrap();
    assert_eq!(read_csv(&dir.path().join(TRIALS_FILE)).1.len(), 1);
    let (_, rows) = read_csv(&dir.path().join(SUMMARY_FILE));
    assert_eq!(rows.len(), 3);
    let methods: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(methods, ["naive", "ols", "nwls"]);
    // one trial per group is too few for statistics
    assert!(run.summary.iter().all(|r| r.suppressed()));
}

#[test]
fn thread_count_does_not_change_output() {
    let mut config = single_cell();
    config.factors.delays_s = vec![0.0, 0.08];
    config.factors.axes = vec![Axis::X, Axis::Y];
    config.factors.trials_per_cell = 3;
    config.plant.x.sigma_x = 1e-4;
    config.plant.x.sigma_f = 0.05;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = cmd_run_experiment(&config, a.path(), Some(1)).unwrap();
    let rb = cmd_run_experiment(&config, b.path(), Some(4)).unwrap();
    assert_eq!(ra.trials_sha256, rb.trials_sha256);
    assert_eq!(ra.summary_sha256, rb.summary_sha256);
    for f in [TRIALS_FILE, SUMMARY_FILE, MANIFEST_FILE] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn run_trial_log_has_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::default();
    let req = TrialRequest { delay: 0.32, novice_stiffness: 60.0, axis: Axis::X, seed: 0 };
    let run = cmd_run_trial(&config, req, dir.path()).unwrap();
    let (header, rows) = read_csv(&dir.path().join(TRIAL_LOG_FILE));
    assert_eq!(header, TRIAL_LOG_HEADER);
    assert_eq!(rows.len(), run.samples);
    assert_eq!(rows.len(), 24_260);
    assert!(rows.iter().all(|r| r.len() == 7));

    let e = run.record.estimates().unwrap();
    assert!(e.naive.stiffness < 0.9 * 60.0, "naive {}", e.naive.stiffness);
    assert!((e.nwls.stiffness - e.reference.stiffness).abs() < 0.2 * e.reference.stiffness);
    assert_eq!(read_csv(&dir.path().join(TRIAL_RECORD_FILE)).1.len(), 1);
}

#[test]
fn zero_amplitude_trial_is_flat_and_reported_failed() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run-trial", "--delta", "0.08", "--k0", "60", "--amplitude", "0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join(TRIAL_LOG_FILE));
    assert!(rows.iter().all(|r| r[1..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0)));
    let (_, record) = read_csv(&dir.path().join(TRIAL_RECORD_FILE));
    assert_eq!(record[0][12], "failed");
    assert!(record[0][13].contains("degenerate"), "{}", record[0][13]);
}

#[test]
fn binary_run_experiment_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run-experiment", "--delays", "0,0.08", "--stiffness", "60", "--axes", "x", "--trials", "2", "--seed", "9"])
        .env("DYADIC_STIFFNESS_OUT", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join(TRIALS_FILE));
    assert_eq!(rows.len(), 4);
    assert_eq!(read_csv(&dir.path().join(SUMMARY_FILE)).1.len(), 6);
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("fractional.toml", "[factors]\ndelays_s = [0.0805]\n", "delays_s"),
        ("negative.toml", "[plant.x]\nmass = -1.0\n", "plant.x.mass"),
        ("unknown.toml", "colour = \"red\"\n", "colour"),
    ];
    for (name, text, key) in cases {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        let out = bin().args(["run-experiment", "--config"]).arg(&path).arg("--out").arg(dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(key), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(!dir.path().join(TRIALS_FILE).exists());
}

#[test]
fn print_config_round_trips() {
    let out = bin().arg("print-config").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(parse_config(&text).unwrap(), ExperimentConfig::default());
}
