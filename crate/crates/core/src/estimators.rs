//! One-parameter stiffness regressions.
//!
//! Every estimator reduces to fitting `Y ≈ k Φ` through the origin with
//! per-sample weights `W`, solved in closed form as
//! `k = Σ W Φ Y / Σ W Φ²`.
//!
//! | method    | `Y`                  | `Φ`                          | `W`                      |
//! |-----------|----------------------|------------------------------|--------------------------|
//! | naive     | `f1`                 | `x̂2 − x̂2(0)`                 | 1                        |
//! | ols       | `f1 (x̃1 − x̂2)`       | `(x1 − x̂2)(x̂2 − x̂2(0))`      | 1                        |
//! | nwls      | as ols               | as ols                       | `1 / (‖deflections‖ + ε)` |
//! | reference | `−f2`                | `x2 − x2(0)`                 | 1                        |
//!
//! `x̂2` is the novice position received by the expert, `x̃1` the expert's own
//! position delayed by the round trip.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::TrialLog;

/// Degeneracy threshold on `Σ W Φ²`.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// Default NWLS regulariser, m.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Ols,
    Nwls,
    Reference,
}

impl Method {
    pub const ESTIMATORS: [Method; 3] = [Method::Naive, Method::Ols, Method::Nwls];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Ols => "ols",
            Method::Nwls => "nwls",
            Method::Reference => "reference",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Signals available at the expert interface.
///
/// Implemented by simulated [`TrialLog`]s and by the analytic
/// [`QuasiStaticSignals`](crate::oracle::QuasiStaticSignals).
pub trait ExpertObservations {
    /// Expert controller force `f1`.
    fn expert_force(&self) -> &[f64];
    /// Expert position `x1`.
    fn expert_position(&self) -> &[f64];
    /// Delayed novice position `x̂2`.
    fn novice_position_received(&self) -> &[f64];
    /// Round-trip delayed expert position `x̃1`.
    fn expert_position_round_trip(&self) -> &[f64];
    /// `x̂2(0)`: the received novice position at rest, before motion.
    fn received_rest_position(&self) -> f64;
}

impl ExpertObservations for TrialLog {
    fn expert_force(&self) -> &[f64] {
        &self.f1
    }
    fn expert_position(&self) -> &[f64] {
        &self.x1
    }
    fn novice_position_received(&self) -> &[f64] {
        &self.x2_hat
    }
    fn expert_position_round_trip(&self) -> &[f64] {
        &self.x1_tilde
    }
    fn received_rest_position(&self) -> f64 {
        self.x2_hat[0]
    }
}

/// A weighted slope-through-origin problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem {
    pub method: Method,
    pub response: Vec<f64>,
    pub regressor: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RegressionProblem {
    pub fn new(method: Method, response: Vec<f64>, regressor: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let n = response.len();
        if regressor.len() != n || weights.len() != n {
            return Err(Error::MalformedProblem(format!(
                "length mismatch: response {n}, regressor {}, weights {}",
                regressor.len(),
                weights.len()
            )));
        }
        if n < 2 {
            return Err(Error::MalformedProblem(format!("need at least 2 samples, got {n}")));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&response) || !finite(&regressor) || !finite(&weights) {
            return Err(Error::MalformedProblem("non-finite entry".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::MalformedProblem("negative weight".into()));
        }
        Ok(RegressionProblem { method, response, regressor, weights })
    }

    /// Unit weights.
    pub fn unweighted(method: Method, response: Vec<f64>, regressor: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; response.len()];
        Self::new(method, response, regressor, weights)
    }

    pub fn len(&self) -> usize {
        self.response.len()
    }

    pub fn is_empty(&self) -> bool {
        self.response.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StiffnessEstimate {
    pub method: Method,
    /// N/m
    pub stiffness: f64,
    pub n_samples: usize,
    /// Unweighted RMS of `Y − kΦ`, in the units of `Y`.
    pub residual_rms: f64,
}

/// Minimiser of `Σ W (Y − kΦ)²`.
pub fn solve_weighted_slope(problem: &RegressionProblem) -> Result<StiffnessEstimate> {
    let (mut num, mut den) = (0.0, 0.0);
    for ((&y, &phi), &w) in problem.response.iter().zip(&problem.regressor).zip(&problem.weights) {
        num += w * phi * y;
        den += w * phi * phi;
    }
    if !(den > DENOMINATOR_TOL) {
        return Err(Error::DegenerateRegressor { denominator: den });
    }
    let stiffness = num / den;
    let sse: f64 = problem
        .response
        .iter()
        .zip(&problem.regressor)
        .map(|(&y, &phi)| (y - stiffness * phi).powi(2))
        .sum();
    Ok(StiffnessEstimate {
        method: problem.method,
        stiffness,
        n_samples: problem.len(),
        residual_rms: (sse / problem.len() as f64).sqrt(),
    })
}

/// Sample window and regulariser shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSettings {
    /// Leading samples discarded before assembly.
    pub warmup_samples: usize,
    /// NWLS regulariser, m.
    pub epsilon: f64,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        EstimatorSettings { warmup_samples: 0, epsilon: DEFAULT_EPSILON }
    }
}

fn window(len: usize, warmup: usize) -> Result<std::ops::Range<usize>> {
    if len < warmup + 2 {
        return Err(Error::MalformedProblem(format!(
            "warm-up of {warmup} samples leaves fewer than 2 of {len}"
        )));
    }
    Ok(warmup..len)
}

fn check_lengths<O: ExpertObservations + ?Sized>(obs: &O) -> Result<usize> {
    let n = obs.expert_force().len();
    let lens = [
        obs.expert_position().len(),
        obs.novice_position_received().len(),
        obs.expert_position_round_trip().len(),
    ];
    if lens.iter().any(|&l| l != n) {
        return Err(Error::MalformedProblem("observation channels differ in length".into()));
    }
    Ok(n)
}

/// Instantaneous expert force against delayed novice displacement.
pub fn build_naive<O: ExpertObservations + ?Sized>(obs: &O, warmup: usize) -> Result<RegressionProblem> {
    let range = window(check_lengths(obs)?, warmup)?;
    let rest = obs.received_rest_position();
    let f1 = &obs.expert_force()[range.clone()];
    let x2_hat = &obs.novice_position_received()[range];
    let regressor = x2_hat.iter().map(|x| x - rest).collect();
    RegressionProblem::unweighted(Method::Naive, f1.to_vec(), regressor)
}

/// `Y`, `Φ` and both deflections of the delay-compensated regression.
fn compensated_terms<O: ExpertObservations + ?Sized>(
    obs: &O,
    warmup: usize,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let range = window(check_lengths(obs)?, warmup)?;
    let rest = obs.received_rest_position();
    let f1 = &obs.expert_force()[range.clone()];
    let x1 = &obs.expert_position()[range.clone()];
    let x2_hat = &obs.novice_position_received()[range.clone()];
    let x1_tilde = &obs.expert_position_round_trip()[range];

    let n = f1.len();
    let mut response = Vec::with_capacity(n);
    let mut regressor = Vec::with_capacity(n);
    let mut deflection = Vec::with_capacity(n);
    for i in 0..n {
        let geometric = x1_tilde[i] - x2_hat[i];
        let local = x1[i] - x2_hat[i];
        response.push(f1[i] * geometric);
        regressor.push(local * (x2_hat[i] - rest));
        deflection.push(geometric.hypot(local));
    }
    Ok((response, regressor, deflection))
}

/// Delay-compensated estimator aligning expert force with the round-trip
/// delayed excitation.
pub fn build_ols<O: ExpertObservations + ?Sized>(obs: &O, warmup: usize) -> Result<RegressionProblem> {
    let (response, regressor, _) = compensated_terms(obs, warmup)?;
    RegressionProblem::unweighted(Method::Ols, response, regressor)
}

/// The OLS problem reweighted by the inverse deflection magnitude.
pub fn build_nwls<O: ExpertObservations + ?Sized>(
    obs: &O,
    warmup: usize,
    epsilon: f64,
) -> Result<RegressionProblem> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon", "must be > 0"));
    }
    let (response, regressor, deflection) = compensated_terms(obs, warmup)?;
    let weights = deflection.iter().map(|d| 1.0 / (d + epsilon)).collect();
    RegressionProblem::new(Method::Nwls, response, regressor, weights)
}

/// Novice-side spring fit, the per-trial ground truth.
pub fn build_reference(log: &TrialLog, warmup: usize) -> Result<RegressionProblem> {
    let range = window(log.len(), warmup)?;
    let rest = log.x2[0];
    let response = log.f2[range.clone()].iter().map(|f| -f).collect();
    let regressor = log.x2[range].iter().map(|x| x - rest).collect();
    RegressionProblem::unweighted(Method::Reference, response, regressor)
}

/// All four fits on one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialEstimates {
    pub reference: StiffnessEstimate,
    pub naive: StiffnessEstimate,
    pub ols: StiffnessEstimate,
    pub nwls: StiffnessEstimate,
}

impl TrialEstimates {
    pub fn get(&self, method: Method) -> &StiffnessEstimate {
        match method {
            Method::Naive => &self.naive,
            Method::Ols => &self.ols,
            Method::Nwls => &self.nwls,
            Method::Reference => &self.reference,
        }
    }
}

pub fn estimate_all(log: &TrialLog, settings: &EstimatorSettings) -> Result<TrialEstimates> {
    let w = settings.warmup_samples;
    Ok(TrialEstimates {
        reference: solve_weighted_slope(&build_reference(log, w)?)?,
        naive: solve_weighted_slope(&build_naive(log, w)?)?,
        ols: solve_weighted_slope(&build_ols(log, w)?)?,
        nwls: solve_weighted_slope(&build_nwls(log, w, settings.epsilon)?)?,
    })
}
