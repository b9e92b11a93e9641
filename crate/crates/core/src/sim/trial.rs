use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::params::steps_for_duration;
use super::{PlantParams, Sample, SimState};
use crate::error::{Error, Result};

/// Uniformly sampled record of everything observable during one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    pub dt: f64,
    pub delay_steps: usize,
    pub t: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub x2_hat: Vec<f64>,
    pub x1_tilde: Vec<f64>,
}

impl TrialLog {
    fn with_capacity(dt: f64, delay_steps: usize, n: usize) -> Self {
        TrialLog {
            dt,
            delay_steps,
            t: Vec::with_capacity(n),
            x1: Vec::with_capacity(n),
            x2: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            x2_hat: Vec::with_capacity(n),
            x1_tilde: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, s: Sample) {
        self.t.push(s.t);
        self.x1.push(s.x1);
        self.x2.push(s.x2);
        self.f1.push(s.f1);
        self.f2.push(s.f2);
        self.x2_hat.push(s.x2_hat);
        self.x1_tilde.push(s.x1_tilde);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Positions scaled by `position`, forces by `force`.
    pub fn rescaled(&self, position: f64, force: f64) -> TrialLog {
        let scale = |v: &[f64], c: f64| v.iter().map(|x| x * c).collect();
        TrialLog {
            dt: self.dt,
            delay_steps: self.delay_steps,
            t: self.t.clone(),
            x1: scale(&self.x1, position),
            x2: scale(&self.x2, position),
            f1: scale(&self.f1, force),
            f2: scale(&self.f2, force),
            x2_hat: scale(&self.x2_hat, position),
            x1_tilde: scale(&self.x1_tilde, position),
        }
    }
}

/// Runs one trial from rest at the origin for `duration` seconds.
///
/// Measurement noise is drawn from a ChaCha8 stream seeded with `seed`, so the
/// same inputs always produce the same log.
pub fn simulate_trial(params: &PlantParams, duration: f64, seed: u64) -> Result<TrialLog> {
    params.validate()?;
    if !(duration >= params.period() * (1.0 - 1e-12)) {
        return Err(Error::invalid(
            "duration",
            format!("must cover at least one excitation period ({:.4} s)", params.period()),
        ));
    }
    let n = steps_for_duration(duration, params.dt).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = SimState::at_rest(params, 0.0, 0.0);
    let mut log = TrialLog::with_capacity(params.dt, params.delay_steps(), n);
    for _ in 0..n {
        log.push(state.step(params, &mut rng)?);
    }
    Ok(log)
}
