//! CSV and JSON artifacts.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always produce equal bytes.

use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::experiment::{SummaryRow, TrialOutcome, TrialRecord};
use crate::sim::TrialLog;

pub const SCHEMA_VERSION: u32 = 1;

pub const TRIALS_HEADER: [&str; 14] = [
    "delta_s", "k0_cmd", "axis", "trial", "seed", "k_ref", "k_naive", "k_ols", "k_nwls", "ape_naive", "ape_ols",
    "ape_nwls", "status", "reason",
];

pub const SUMMARY_HEADER: [&str; 9] = [
    "delta_s",
    "k0_cmd",
    "axis",
    "method",
    "n",
    "median_ape",
    "iqr_ape",
    "p_vs_naive",
    "significant_at_0p05",
];

pub const TRIAL_LOG_HEADER: [&str; 7] = ["t", "x1", "x2", "f1", "f2", "x2_hat", "x1_tilde"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn trial_row(r: &TrialRecord) -> Vec<String> {
    let c = &r.condition;
    let mut row = vec![
        c.delay.to_string(),
        c.novice_stiffness.to_string(),
        c.axis.to_string(),
        c.trial.to_string(),
        c.seed.to_string(),
    ];
    match &r.outcome {
        TrialOutcome::Valid { estimates, ape_naive, ape_ols, ape_nwls } => {
            for v in [
                estimates.reference.stiffness,
                estimates.naive.stiffness,
                estimates.ols.stiffness,
                estimates.nwls.stiffness,
                *ape_naive,
                *ape_ols,
                *ape_nwls,
            ] {
                row.push(v.to_string());
            }
            row.push("ok".into());
            row.push(String::new());
        }
        TrialOutcome::Failed { reason } => {
            row.extend(std::iter::repeat_n(String::new(), 7));
            row.push("failed".into());
            row.push(reason.clone());
        }
    }
    row
}

pub fn write_trials<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIALS_HEADER)?;
    for r in records {
        w.write_record(trial_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.delay.to_string(),
            r.novice_stiffness.to_string(),
            r.axis.to_string(),
            r.method.to_string(),
            r.n.to_string(),
            opt(r.median_ape),
            opt(r.iqr_ape),
            opt(r.p_vs_naive),
            r.significant().map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trial_log<W: Write>(out: W, log: &TrialLog) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_LOG_HEADER)?;
    for i in 0..log.len() {
        w.write_record(
            [log.t[i], log.x1[i], log.x2[i], log.f1[i], log.f2[i], log.x2_hat[i], log.x1_tilde[i]]
                .map(|v| v.to_string()),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedTrial {
    pub delta_s: f64,
    pub k0_cmd: f64,
    pub axis: String,
    pub trial: usize,
    pub seed: u64,
    pub reason: String,
}

impl FailedTrial {
    pub fn from_record(r: &TrialRecord) -> Option<Self> {
        let reason = r.failure_reason()?;
        let c = &r.condition;
        Some(FailedTrial {
            delta_s: c.delay,
            k0_cmd: c.novice_stiffness,
            axis: c.axis.to_string(),
            trial: c.trial,
            seed: c.seed,
            reason: reason.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<C: Serialize> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: C,
    pub trials_columns: Vec<&'static str>,
    pub summary_columns: Vec<&'static str>,
    pub files: Vec<FileDigest>,
    pub n_trials: usize,
    pub n_failed: usize,
    pub failed_trials: Vec<FailedTrial>,
}
