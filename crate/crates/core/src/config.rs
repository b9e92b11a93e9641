//! TOML experiment configuration.
//!
//! Every key is optional; omitted keys take the platform defaults. Unknown
//! keys are rejected.
//!
//! ```toml
//! dt = 0.001                 # s
//! coupling_stiffness = 200.0 # N/m
//! duration_periods = 2.0
//! warmup_periods = 1.0
//! epsilon = 1e-6             # m
//! base_seed = 0
//! output_dir = "results"
//!
//! [controller]
//! stiffness = 120.0          # N/m
//! amplitude = 0.05           # m
//! omega = 0.518              # rad/s
//!
//! [factors]
//! delays_s = [0.0, 0.08, 0.16, 0.32]
//! stiffness_levels = [60.0, 120.0]
//! axes = ["x", "y"]
//! trials_per_cell = 10
//!
//! [plant.x]
//! mass = 2.0
//! mass_scale = 1.0
//! damping = 30.0
//! friction = 0.0
//! sigma_x = 0.0
//! sigma_f = 0.0
//!
//! [plant.y]
//! mass_scale = 1.5
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::DEFAULT_EPSILON;
use crate::experiment::{Axis, AxisPlant, GridConfig, TrialSetup};
use crate::sim::PlantParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    pub stiffness: f64,
    pub amplitude: f64,
    pub omega: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig { stiffness: 120.0, amplitude: 0.05, omega: 0.518 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FactorsConfig {
    pub delays_s: Vec<f64>,
    pub stiffness_levels: Vec<f64>,
    pub axes: Vec<Axis>,
    pub trials_per_cell: usize,
}

impl Default for FactorsConfig {
    fn default() -> Self {
        let grid = GridConfig::default();
        FactorsConfig {
            delays_s: grid.delays,
            stiffness_levels: grid.stiffness_levels,
            axes: grid.axes,
            trials_per_cell: grid.trials_per_cell,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantConfig {
    #[serde(default)]
    pub x: AxisPlant,
    #[serde(default = "AxisPlant::y_default")]
    pub y: AxisPlant,
}

impl Default for PlantConfig {
    fn default() -> Self {
        PlantConfig { x: AxisPlant::default(), y: AxisPlant::y_default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dt: f64,
    pub coupling_stiffness: f64,
    pub duration_periods: f64,
    pub warmup_periods: f64,
    pub epsilon: f64,
    pub base_seed: u64,
    pub output_dir: String,
    pub controller: ControllerConfig,
    pub factors: FactorsConfig,
    pub plant: PlantConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dt: 1e-3,
            coupling_stiffness: 200.0,
            duration_periods: 2.0,
            warmup_periods: 1.0,
            epsilon: DEFAULT_EPSILON,
            base_seed: 0,
            output_dir: "results".into(),
            controller: ControllerConfig::default(),
            factors: FactorsConfig::default(),
            plant: PlantConfig::default(),
        }
    }
}

fn check(ok: bool, key: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(key, reason))
    }
}

/// Parses and validates a TOML document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn grid(&self) -> GridConfig {
        GridConfig {
            delays: self.factors.delays_s.clone(),
            stiffness_levels: self.factors.stiffness_levels.clone(),
            axes: self.factors.axes.clone(),
            trials_per_cell: self.factors.trials_per_cell,
            base_seed: self.base_seed,
        }
    }

    pub fn setup(&self) -> TrialSetup {
        TrialSetup {
            base: PlantParams {
                coupling_stiffness: self.coupling_stiffness,
                controller_stiffness: self.controller.stiffness,
                amplitude: self.controller.amplitude,
                omega: self.controller.omega,
                dt: self.dt,
                ..PlantParams::default()
            },
            x: self.plant.x,
            y: self.plant.y,
            duration_periods: self.duration_periods,
            warmup_periods: self.warmup_periods,
            epsilon: self.epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("dt", self.dt),
            ("coupling_stiffness", self.coupling_stiffness),
            ("duration_periods", self.duration_periods),
            ("warmup_periods", self.warmup_periods),
            ("epsilon", self.epsilon),
            ("controller.stiffness", self.controller.stiffness),
            ("controller.amplitude", self.controller.amplitude),
            ("controller.omega", self.controller.omega),
        ];
        for (key, v) in finite {
            check(v.is_finite(), key, "must be finite")?;
        }
        check(self.dt > 0.0, "dt", "must be > 0")?;
        check(self.coupling_stiffness > 0.0, "coupling_stiffness", "must be > 0")?;
        check(self.controller.stiffness >= 0.0, "controller.stiffness", "must be >= 0")?;
        check(self.controller.omega > 0.0, "controller.omega", "must be > 0")?;
        check(self.controller.omega * self.dt < 0.1, "controller.omega", "omega * dt must be < 0.1")?;
        check(self.duration_periods >= 1.0, "duration_periods", "must be >= 1")?;
        check(
            self.warmup_periods >= 0.0 && self.warmup_periods < self.duration_periods,
            "warmup_periods",
            "must be >= 0 and below duration_periods",
        )?;
        check(self.epsilon > 0.0, "epsilon", "must be > 0")?;

        check(!self.factors.delays_s.is_empty(), "factors.delays_s", "must not be empty")?;
        check(!self.factors.stiffness_levels.is_empty(), "factors.stiffness_levels", "must not be empty")?;
        check(!self.factors.axes.is_empty(), "factors.axes", "must not be empty")?;
        check(self.factors.trials_per_cell >= 1, "factors.trials_per_cell", "must be >= 1")?;
        for &k0 in &self.factors.stiffness_levels {
            check(k0.is_finite() && k0 > 0.0, "factors.stiffness_levels", "levels must be > 0")?;
        }

        for (name, plant) in [("x", &self.plant.x), ("y", &self.plant.y)] {
            let fields = [
                ("mass", plant.mass, plant.mass > 0.0, "must be > 0"),
                ("mass_scale", plant.mass_scale, plant.mass_scale > 0.0, "must be > 0"),
                ("damping", plant.damping, plant.damping >= 0.0, "must be >= 0"),
                ("friction", plant.friction, plant.friction >= 0.0, "must be >= 0"),
                ("sigma_x", plant.sigma_x, plant.sigma_x >= 0.0, "must be >= 0"),
                ("sigma_f", plant.sigma_f, plant.sigma_f >= 0.0, "must be >= 0"),
            ];
            for (field, value, ok, reason) in fields {
                check(value.is_finite() && ok, &format!("plant.{name}.{field}"), reason)?;
            }
        }

        let setup = self.setup();
        for &delay in &self.factors.delays_s {
            for &k0 in &self.factors.stiffness_levels {
                for &axis in &self.factors.axes {
                    setup.params(delay, k0, axis).validate().map_err(|e| match e {
                        Error::InvalidParameter { name, reason } if name == "delay" => {
                            Error::invalid("factors.delays_s", format!("{delay}: {reason}"))
                        }
                        other => other,
                    })?;
                }
            }
        }
        Ok(())
    }
}
