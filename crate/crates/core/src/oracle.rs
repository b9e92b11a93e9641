//! Closed-form quasi-static ground truth.
//!
//! With velocities and accelerations neglected, the delayed plant reduces to
//! two spring balances:
//!
//! ```text
//! novice:  k (x1(t - δ) - x2(t)) = k0 x2(t)       =>  x2 = k x1(t - δ) / (k + k0)
//! expert:  f1(t) = k (x1(t) - x2(t - δ))
//! ```
//!
//! The expert trajectory is `x1(t) = A sin(ωt)` for all `t`, including
//! `t < 0`, and the novice spring rests at the origin. No integration is
//! involved, so estimator identities can be checked to rounding error.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::estimators::ExpertObservations;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiStaticSpec {
    pub coupling_stiffness: f64,
    pub novice_stiffness: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub delay: f64,
    /// Requested sample spacing; the actual spacing is shrunk slightly so the
    /// record spans a whole number of periods.
    pub dt: f64,
    pub periods: usize,
}

impl QuasiStaticSpec {
    /// Default platform constants at a given delay and novice stiffness.
    pub fn with(delay: f64, novice_stiffness: f64) -> Self {
        QuasiStaticSpec {
            coupling_stiffness: 200.0,
            novice_stiffness,
            amplitude: 0.05,
            omega: 0.518,
            delay,
            dt: 1e-3,
            periods: 2,
        }
    }
}

/// Sampled equilibrium signals, usable wherever expert-side observations are.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiStaticSignals {
    pub spec: QuasiStaticSpec,
    /// Actual sample spacing.
    pub dt: f64,
    pub t: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub x2_hat: Vec<f64>,
    pub x1_tilde: Vec<f64>,
    pub f1: Vec<f64>,
}

impl QuasiStaticSignals {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

pub fn generate(spec: QuasiStaticSpec) -> Result<QuasiStaticSignals> {
    let k = spec.coupling_stiffness;
    let k0 = spec.novice_stiffness;
    if !(k > 0.0) {
        return Err(Error::invalid("coupling_stiffness", "must be > 0"));
    }
    if !(k + k0 > 0.0) {
        return Err(Error::invalid("novice_stiffness", "coupling + novice stiffness must be > 0"));
    }
    if spec.periods == 0 {
        return Err(Error::invalid("periods", "must be >= 1"));
    }
    if !(spec.omega > 0.0 && spec.dt > 0.0 && spec.delay >= 0.0) {
        return Err(Error::invalid("omega/dt/delay", "omega, dt must be > 0 and delay >= 0"));
    }

    let span = spec.periods as f64 * TAU / spec.omega;
    let n = (span / spec.dt).ceil() as usize;
    let dt = span / n as f64;
    let gain = k / (k + k0);
    let x1_at = |t: f64| spec.amplitude * (spec.omega * t).sin();
    let x2_at = |t: f64| gain * x1_at(t - spec.delay);

    let mut s = QuasiStaticSignals {
        spec,
        dt,
        t: Vec::with_capacity(n),
        x1: Vec::with_capacity(n),
        x2: Vec::with_capacity(n),
        x2_hat: Vec::with_capacity(n),
        x1_tilde: Vec::with_capacity(n),
        f1: Vec::with_capacity(n),
    };
    for i in 0..n {
        let t = i as f64 * dt;
        let x1 = x1_at(t);
        let x2_hat = x2_at(t - spec.delay);
        s.t.push(t);
        s.x1.push(x1);
        s.x2.push(x2_at(t));
        s.x2_hat.push(x2_hat);
        s.x1_tilde.push(x1_at(t - 2.0 * spec.delay));
        s.f1.push(k * (x1 - x2_hat));
    }
    Ok(s)
}

impl ExpertObservations for QuasiStaticSignals {
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
        0.0
    }
}

/// Full-period Naive estimate on quasi-static sinusoids:
/// `(k + k0) cos(2ωδ) − k`.
pub fn naive_bias_closed_form(coupling_stiffness: f64, novice_stiffness: f64, omega: f64, delay: f64) -> f64 {
    (coupling_stiffness + novice_stiffness) * (2.0 * omega * delay).cos() - coupling_stiffness
}
