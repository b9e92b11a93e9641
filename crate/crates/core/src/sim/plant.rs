use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{DelayLine, PlantParams};
use crate::error::{Error, Result};

/// Velocity scale of the tanh-smoothed Coulomb friction term, m/s.
pub const FRICTION_VELOCITY_SCALE: f64 = 1e-3;

/// One logged sample. Positions and forces carry measurement noise; the
/// delayed channels carry the noisy measurements taken at their source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub f1: f64,
    pub f2: f64,
    /// Novice position as received by the expert, `x2(t - delay)`.
    pub x2_hat: f64,
    /// Round-trip delayed expert position from the expert-side observer,
    /// `x1(t - 2 delay)`.
    pub x1_tilde: f64,
}

/// Integrator state of the coupled plant.
///
/// Two delay lines carry the true positions across the channel and drive the
/// coupling spring. Two more carry the measured positions that the expert
/// side logs: the novice telemetry and the round-trip observer.
#[derive(Debug, Clone)]
pub struct SimState {
    step: usize,
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
    novice_rest: f64,
    to_novice: DelayLine,
    to_expert: DelayLine,
    telemetry: DelayLine,
    observer: DelayLine,
}

fn friction_force(magnitude: f64, v: f64) -> f64 {
    if magnitude == 0.0 {
        0.0
    } else {
        magnitude * (v / FRICTION_VELOCITY_SCALE).tanh()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma == 0.0 {
        0.0
    } else {
        let z: f64 = StandardNormal.sample(rng);
        sigma * z
    }
}

impl SimState {
    /// System at rest at `x1`, `x2` for all `t <= 0`; the novice spring is
    /// anchored at `x2`.
    pub fn at_rest(params: &PlantParams, x1: f64, x2: f64) -> Self {
        let c = params.delay_steps();
        SimState {
            step: 0,
            x1,
            v1: 0.0,
            x2,
            v2: 0.0,
            novice_rest: x2,
            to_novice: DelayLine::new(c, x1),
            to_expert: DelayLine::new(c, x2),
            telemetry: DelayLine::new(c, x2),
            observer: DelayLine::new(2 * c, x1),
        }
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self, params: &PlantParams) -> f64 {
        self.step as f64 * params.dt
    }

    pub fn novice_rest(&self) -> f64 {
        self.novice_rest
    }

    /// Advances one semi-implicit Euler step and returns the sample logged at
    /// the start of the step.
    pub fn step<R: Rng + ?Sized>(&mut self, params: &PlantParams, rng: &mut R) -> Result<Sample> {
        let t = self.time(params);
        let k = params.coupling_stiffness;

        let x1_at_novice = self.to_novice.process(self.x1);
        let x2_at_expert = self.to_expert.process(self.x2);

        let f1 = params.controller_stiffness * (params.amplitude * (params.omega * t).sin() - self.x1);
        let f2 = -params.novice_stiffness * (self.x2 - self.novice_rest);

        let x1_meas = self.x1 + gaussian(rng, params.sigma_x);
        let x2_meas = self.x2 + gaussian(rng, params.sigma_x);
        let f1_meas = f1 + gaussian(rng, params.sigma_f);
        let f2_meas = f2 + gaussian(rng, params.sigma_f);
        if self.step == 0 {
            self.telemetry.fill(x2_meas);
            self.observer.fill(x1_meas);
        }
        let sample = Sample {
            t,
            x1: x1_meas,
            x2: x2_meas,
            f1: f1_meas,
            f2: f2_meas,
            x2_hat: self.telemetry.process(x2_meas),
            x1_tilde: self.observer.process(x1_meas),
        };

        let force1 = k * (x2_at_expert - self.x1) + f1
            - params.expert_damping * self.v1
            - friction_force(params.friction, self.v1);
        let force2 = k * (x1_at_novice - self.x2) + f2
            - params.novice_damping * self.v2
            - friction_force(params.friction, self.v2);
        self.v1 += params.dt * force1 / params.expert_mass;
        self.v2 += params.dt * force2 / params.novice_mass;
        self.x1 += params.dt * self.v1;
        self.x2 += params.dt * self.v2;
        self.step += 1;

        if ![self.x1, self.x2, self.v1, self.v2].iter().all(|v| v.is_finite()) {
            return Err(Error::Diverged { step: self.step });
        }
        Ok(sample)
    }
}
