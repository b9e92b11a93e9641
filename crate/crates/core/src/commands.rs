//! The CLI's subcommands as library functions.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiment::{
    expand_grid, run_conditions, score_log, summarize, Axis, Condition, SummaryRow, TrialRecord,
};
use crate::output::{
    sha256_hex, write_summary, write_trial_log, write_trials, FailedTrial, FileDigest, Manifest, SCHEMA_VERSION,
    SUMMARY_HEADER, TRIALS_HEADER,
};
use crate::sim::simulate_trial;

pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const TRIAL_LOG_FILE: &str = "trial_log.csv";
pub const TRIAL_RECORD_FILE: &str = "trial_record.csv";

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub out_dir: PathBuf,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    pub trials_sha256: String,
    pub summary_sha256: String,
}

impl ExperimentRun {
    pub fn n_failed(&self) -> usize {
        self.records.iter().filter(|r| !r.is_valid()).count()
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", dir.display()))))
}

/// Runs the full factorial grid and writes `trials.csv`, `summary.csv` and
/// `manifest.json` into `out_dir`. `jobs` bounds the worker threads
/// (`None` = one per core).
pub fn cmd_run_experiment(config: &ExperimentConfig, out_dir: &Path, jobs: Option<usize>) -> Result<ExperimentRun> {
    config.validate()?;
    let conditions = expand_grid(&config.grid())?;
    let setup = config.setup();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records = pool.install(|| run_conditions(&conditions, &setup));
    let summary = summarize(&records);

    let mut trials_csv = Vec::new();
    write_trials(&mut trials_csv, &records)?;
    let mut summary_csv = Vec::new();
    write_summary(&mut summary_csv, &summary)?;
    let trials_sha256 = sha256_hex(&trials_csv);
    let summary_sha256 = sha256_hex(&summary_csv);

    let failed_trials: Vec<FailedTrial> = records.iter().filter_map(FailedTrial::from_record).collect();
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        config,
        trials_columns: TRIALS_HEADER.to_vec(),
        summary_columns: SUMMARY_HEADER.to_vec(),
        files: vec![
            FileDigest { path: TRIALS_FILE.into(), sha256: trials_sha256.clone() },
            FileDigest { path: SUMMARY_FILE.into(), sha256: summary_sha256.clone() },
        ],
        n_trials: records.len(),
        n_failed: failed_trials.len(),
        failed_trials,
    };

    create_dir(out_dir)?;
    write_file(out_dir, TRIALS_FILE, &trials_csv)?;
    write_file(out_dir, SUMMARY_FILE, &summary_csv)?;
    let mut manifest_json = serde_json::to_vec_pretty(&manifest)?;
    manifest_json.push(b'\n');
    write_file(out_dir, MANIFEST_FILE, &manifest_json)?;

    Ok(ExperimentRun { out_dir: out_dir.to_path_buf(), records, summary, trials_sha256, summary_sha256 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRequest {
    pub delay: f64,
    pub novice_stiffness: f64,
    pub axis: Axis,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct TrialRun {
    pub record: TrialRecord,
    pub samples: usize,
}

/// Simulates a single trial and writes its full time series
/// (`trial_log.csv`) plus its scored record (`trial_record.csv`, same columns
/// as `trials.csv`).
pub fn cmd_run_trial(config: &ExperimentConfig, request: TrialRequest, out_dir: &Path) -> Result<TrialRun> {
    let setup = config.setup();
    let params = setup.params(request.delay, request.novice_stiffness, request.axis);
    params.validate()?;
    let condition = Condition {
        delay_index: 0,
        stiffness_index: 0,
        delay: request.delay,
        novice_stiffness: request.novice_stiffness,
        axis: request.axis,
        trial: 0,
        seed: request.seed,
    };
    let log = simulate_trial(&params, setup.duration(&params), request.seed)?;
    let record = score_log(&condition, &log, &setup);

    create_dir(out_dir)?;
    let mut log_csv = Vec::new();
    write_trial_log(&mut log_csv, &log)?;
    write_file(out_dir, TRIAL_LOG_FILE, &log_csv)?;
    let mut record_csv = Vec::new();
    write_trials(&mut record_csv, std::slice::from_ref(&record))?;
    write_file(out_dir, TRIAL_RECORD_FILE, &record_csv)?;
    Ok(TrialRun { record, samples: log.len() })
}
