use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Axis, Condition};
use crate::error::{Error, Result};
use crate::estimators::{estimate_all, EstimatorSettings, Method, TrialEstimates, DEFAULT_EPSILON};
use crate::sim::{simulate_trial, PlantParams, TrialLog};

/// Mechanical and sensing properties of one robot axis, shared by the expert
/// and novice interfaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AxisPlant {
    /// kg, before `mass_scale`.
    pub mass: f64,
    pub mass_scale: f64,
    /// N·s/m
    pub damping: f64,
    /// Coulomb friction magnitude, N.
    pub friction: f64,
    pub sigma_x: f64,
    pub sigma_f: f64,
}

impl Default for AxisPlant {
    fn default() -> Self {
        AxisPlant {
            mass: 2.0,
            mass_scale: 1.0,
            damping: 30.0,
            friction: 0.0,
            sigma_x: 0.0,
            sigma_f: 0.0,
        }
    }
}

impl AxisPlant {
    /// The Y axis of the platform carries more effective inertia.
    pub fn y_default() -> Self {
        AxisPlant { mass_scale: 1.5, ..Default::default() }
    }

    pub fn effective_mass(&self) -> f64 {
        self.mass * self.mass_scale
    }
}

/// Everything except the factor levels needed to run one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSetup {
    /// Shared constants; per-axis and per-condition fields are overwritten.
    pub base: PlantParams,
    pub x: AxisPlant,
    pub y: AxisPlant,
    pub duration_periods: f64,
    pub warmup_periods: f64,
    pub epsilon: f64,
}

impl Default for TrialSetup {
    fn default() -> Self {
        TrialSetup {
            base: PlantParams::default(),
            x: AxisPlant::default(),
            y: AxisPlant::y_default(),
            duration_periods: 2.0,
            warmup_periods: 1.0,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl TrialSetup {
    pub fn axis(&self, axis: Axis) -> &AxisPlant {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
        }
    }

    pub fn axis_mut(&mut self, axis: Axis) -> &mut AxisPlant {
        match axis {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
        }
    }

    pub fn params(&self, delay: f64, novice_stiffness: f64, axis: Axis) -> PlantParams {
        let plant = self.axis(axis);
        let mass = plant.effective_mass();
        PlantParams {
            expert_mass: mass,
            novice_mass: mass,
            expert_damping: plant.damping,
            novice_damping: plant.damping,
            friction: plant.friction,
            sigma_x: plant.sigma_x,
            sigma_f: plant.sigma_f,
            delay,
            novice_stiffness,
            ..self.base
        }
    }

    pub fn estimator_settings(&self, params: &PlantParams) -> EstimatorSettings {
        EstimatorSettings {
            warmup_samples: params.samples_for_periods(self.warmup_periods),
            epsilon: self.epsilon,
        }
    }

    pub fn duration(&self, params: &PlantParams) -> f64 {
        self.duration_periods * params.period()
    }
}

/// Absolute percentage error of `estimate` against `reference`.
pub fn ape(estimate: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 || !reference.is_finite() {
        return Err(Error::UndefinedReference);
    }
    Ok((estimate - reference).abs() / reference.abs() * 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TrialOutcome {
    Valid {
        estimates: TrialEstimates,
        ape_naive: f64,
        ape_ols: f64,
        ape_nwls: f64,
    },
    Failed {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub condition: Condition,
    pub outcome: TrialOutcome,
}

impl TrialRecord {
    pub fn is_valid(&self) -> bool {
        matches!(self.outcome, TrialOutcome::Valid { .. })
    }

    pub fn estimates(&self) -> Option<&TrialEstimates> {
        match &self.outcome {
            TrialOutcome::Valid { estimates, .. } => Some(estimates),
            TrialOutcome::Failed { .. } => None,
        }
    }

    /// APE of `method` against the reference; `None` for failed trials or
    /// the reference itself.
    pub fn ape(&self, method: Method) -> Option<f64> {
        match (&self.outcome, method) {
            (TrialOutcome::Valid { ape_naive, .. }, Method::Naive) => Some(*ape_naive),
            (TrialOutcome::Valid { ape_ols, .. }, Method::Ols) => Some(*ape_ols),
            (TrialOutcome::Valid { ape_nwls, .. }, Method::Nwls) => Some(*ape_nwls),
            _ => None,
        }
    }

    pub fn failure_reason(&self) -> Option<&str> {
        match &self.outcome {
            TrialOutcome::Failed { reason } => Some(reason),
            TrialOutcome::Valid { .. } => None,
        }
    }
}

fn score(log: &TrialLog, settings: &EstimatorSettings) -> Result<TrialOutcome> {
    let estimates = estimate_all(log, settings)?;
    let k_ref = estimates.reference.stiffness;
    if !(k_ref > 0.0) {
        return Err(Error::UndefinedReference);
    }
    Ok(TrialOutcome::Valid {
        ape_naive: ape(estimates.naive.stiffness, k_ref)?,
        ape_ols: ape(estimates.ols.stiffness, k_ref)?,
        ape_nwls: ape(estimates.nwls.stiffness, k_ref)?,
        estimates,
    })
}

fn failed(e: Error) -> TrialOutcome {
    TrialOutcome::Failed { reason: e.to_string() }
}

/// Scores an already simulated log of `condition`.
pub fn score_log(condition: &Condition, log: &TrialLog, setup: &TrialSetup) -> TrialRecord {
    let params = setup.params(condition.delay, condition.novice_stiffness, condition.axis);
    let outcome = score(log, &setup.estimator_settings(&params)).unwrap_or_else(failed);
    TrialRecord { condition: *condition, outcome }
}

/// Simulates one condition and scores all estimators against the novice-side
/// reference. Failures are captured in the record.
pub fn run_condition(condition: &Condition, setup: &TrialSetup) -> TrialRecord {
    let params = setup.params(condition.delay, condition.novice_stiffness, condition.axis);
    match simulate_trial(&params, setup.duration(&params), condition.seed) {
        Ok(log) => score_log(condition, &log, setup),
        Err(e) => TrialRecord { condition: *condition, outcome: failed(e) },
    }
}

/// Runs conditions in parallel on the current rayon pool and returns records
/// sorted by condition key.
pub fn run_conditions(conditions: &[Condition], setup: &TrialSetup) -> Vec<TrialRecord> {
    let mut records: Vec<TrialRecord> = conditions.par_iter().map(|c| run_condition(c, setup)).collect();
    records.sort_by_key(|r| r.condition.key());
    records
}
