use std::collections::BTreeMap;

use serde::Serialize;

use super::stats::{iqr, median, wilcoxon_rank_sum};
use super::{Axis, TrialRecord};
use crate::estimators::Method;

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Minimum valid trials for a group's statistics to be reported.
const MIN_GROUP_SIZE: usize = 2;

/// APE statistics of one estimator within one (delay, stiffness, axis) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub delay_index: usize,
    pub stiffness_index: usize,
    pub delay: f64,
    pub novice_stiffness: f64,
    pub axis: Axis,
    pub method: Method,
    /// Valid trials in the group.
    pub n: usize,
    pub median_ape: Option<f64>,
    pub iqr_ape: Option<f64>,
    /// Two-sided rank-sum p of this method's APEs against Naive's; absent for
    /// the Naive row itself and for suppressed groups.
    pub p_vs_naive: Option<f64>,
}

impl SummaryRow {
    /// Statistics were withheld because too few trials were valid.
    pub fn suppressed(&self) -> bool {
        self.median_ape.is_none()
    }

    pub fn significant(&self) -> Option<bool> {
        self.p_vs_naive.map(|p| p < SIGNIFICANCE_LEVEL)
    }
}

/// One row per (cell, estimator), ordered by delay level, stiffness level,
/// axis, then Naive/OLS/NWLS.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(usize, usize, Axis), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells.entry(r.condition.cell()).or_default().push(r);
    }

    let mut rows = Vec::with_capacity(cells.len() * Method::ESTIMATORS.len());
    for ((di, ki, axis), group) in cells {
        let first = group[0].condition;
        let apes = |m: Method| -> Vec<f64> { group.iter().filter_map(|r| r.ape(m)).collect() };
        let naive = apes(Method::Naive);
        for method in Method::ESTIMATORS {
            let values = apes(method);
            let enough = values.len() >= MIN_GROUP_SIZE;
            let p_vs_naive = if enough && method != Method::Naive {
                wilcoxon_rank_sum(&values, &naive).ok().map(|r| r.p_two_sided)
            } else {
                None
            };
            rows.push(SummaryRow {
                delay_index: di,
                stiffness_index: ki,
                delay: first.delay,
                novice_stiffness: first.novice_stiffness,
                axis,
                method,
                n: values.len(),
                median_ape: if enough { median(&values) } else { None },
                iqr_ape: if enough { iqr(&values) } else { None },
                p_vs_naive,
            });
        }
    }
    rows
}
