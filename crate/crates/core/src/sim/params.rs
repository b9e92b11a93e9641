use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `delay / dt` being a whole number of steps.
const STEP_MULTIPLE_TOL: f64 = 1e-9;

/// Physical and controller constants of one axis of the coupled system.
///
/// Both interfaces are 1-D masses with viscous damping and optional Coulomb
/// friction. The virtual coupling spring acts on positions exchanged over the
/// delayed channel; the expert runs an impedance controller towards
/// `amplitude * sin(omega * t)`; the novice is a spring anchored at its rest
/// position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantParams {
    /// kg
    pub expert_mass: f64,
    /// kg
    pub novice_mass: f64,
    /// N·s/m
    pub expert_damping: f64,
    /// N·s/m
    pub novice_damping: f64,
    /// Virtual coupling spring, N/m.
    pub coupling_stiffness: f64,
    /// The quantity being estimated, N/m.
    pub novice_stiffness: f64,
    /// Expert impedance controller stiffness, N/m.
    pub controller_stiffness: f64,
    /// Excitation amplitude, m.
    pub amplitude: f64,
    /// Excitation angular frequency, rad/s.
    pub omega: f64,
    /// One-way channel delay, s. Must be a whole number of steps.
    pub delay: f64,
    /// Integration step, s.
    pub dt: f64,
    /// Coulomb friction magnitude on each interface, N.
    pub friction: f64,
    /// Position measurement noise std-dev, m.
    pub sigma_x: f64,
    /// Force measurement noise std-dev, N.
    pub sigma_f: f64,
}

impl Default for PlantParams {
    fn default() -> Self {
        PlantParams {
            expert_mass: 2.0,
            novice_mass: 2.0,
            expert_damping: 30.0,
            novice_damping: 30.0,
            coupling_stiffness: 200.0,
            novice_stiffness: 60.0,
            controller_stiffness: 120.0,
            amplitude: 0.05,
            omega: 0.518,
            delay: 0.0,
            dt: 1e-3,
            friction: 0.0,
            sigma_x: 0.0,
            sigma_f: 0.0,
        }
    }
}

fn require(ok: bool, name: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(name, reason))
    }
}

impl PlantParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("expert_mass", self.expert_mass),
            ("novice_mass", self.novice_mass),
            ("expert_damping", self.expert_damping),
            ("novice_damping", self.novice_damping),
            ("coupling_stiffness", self.coupling_stiffness),
            ("novice_stiffness", self.novice_stiffness),
            ("controller_stiffness", self.controller_stiffness),
            ("amplitude", self.amplitude),
            ("omega", self.omega),
            ("delay", self.delay),
            ("dt", self.dt),
            ("friction", self.friction),
            ("sigma_x", self.sigma_x),
            ("sigma_f", self.sigma_f),
        ];
        for (name, value) in fields {
            require(value.is_finite(), name, "must be finite")?;
        }
        require(self.expert_mass > 0.0, "expert_mass", "must be > 0")?;
        require(self.novice_mass > 0.0, "novice_mass", "must be > 0")?;
        require(self.expert_damping >= 0.0, "expert_damping", "must be >= 0")?;
        require(self.novice_damping >= 0.0, "novice_damping", "must be >= 0")?;
        require(self.coupling_stiffness > 0.0, "coupling_stiffness", "must be > 0")?;
        require(self.novice_stiffness >= 0.0, "novice_stiffness", "must be >= 0")?;
        require(self.controller_stiffness >= 0.0, "controller_stiffness", "must be >= 0")?;
        require(self.dt > 0.0, "dt", "must be > 0")?;
        require(self.friction >= 0.0, "friction", "must be >= 0")?;
        require(self.sigma_x >= 0.0, "sigma_x", "must be >= 0")?;
        require(self.sigma_f >= 0.0, "sigma_f", "must be >= 0")?;
        require(self.delay >= 0.0, "delay", "must be >= 0")?;
        let steps = self.delay / self.dt;
        require(
            (steps - steps.round()).abs() < STEP_MULTIPLE_TOL,
            "delay",
            "must be a whole number of integration steps",
        )?;
        require(
            self.omega * self.dt < 0.1,
            "omega",
            "omega * dt must be < 0.1",
        )?;
        Ok(())
    }

    /// One-way delay in integration steps.
    pub fn delay_steps(&self) -> usize {
        (self.delay / self.dt).round() as usize
    }

    /// Excitation period, s.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Number of samples covering `periods` excitation periods.
    pub fn samples_for_periods(&self, periods: f64) -> usize {
        steps_for_duration(periods * self.period(), self.dt)
    }

    /// Scales the inertia of both interfaces by `factor`.
    pub fn with_masses_scaled(mut self, factor: f64) -> Self {
        self.expert_mass *= factor;
        self.novice_mass *= factor;
        self
    }
}

/// `ceil(duration / dt)`, treating values within rounding noise of an
/// integer as that integer.
pub(crate) fn steps_for_duration(duration: f64, dt: f64) -> usize {
    let ratio = duration / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() < STEP_MULTIPLE_TOL * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}
