use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }

    fn code(self) -> u64 {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            other => Err(Error::invalid("axis", format!("unknown axis `{other}` (expected x or y)"))),
        }
    }
}

/// Factor levels of the full factorial design.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub delays: Vec<f64>,
    pub stiffness_levels: Vec<f64>,
    pub axes: Vec<Axis>,
    pub trials_per_cell: usize,
    pub base_seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            delays: vec![0.0, 0.08, 0.16, 0.32],
            stiffness_levels: vec![60.0, 120.0],
            axes: vec![Axis::X, Axis::Y],
            trials_per_cell: 10,
            base_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub delay_index: usize,
    pub stiffness_index: usize,
    /// One-way delay, s.
    pub delay: f64,
    /// Commanded novice stiffness, N/m.
    pub novice_stiffness: f64,
    pub axis: Axis,
    pub trial: usize,
    pub seed: u64,
}

impl Condition {
    /// Ordering key: delay level, stiffness level, axis, trial.
    pub fn key(&self) -> (usize, usize, Axis, usize) {
        (self.delay_index, self.stiffness_index, self.axis, self.trial)
    }

    /// The (delay, stiffness, axis) cell this trial belongs to.
    pub fn cell(&self) -> (usize, usize, Axis) {
        (self.delay_index, self.stiffness_index, self.axis)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-condition seed: `base + mix(levels, trial)`. `mix` is a bijection on
/// the packed key, so distinct conditions never share a seed.
pub(crate) fn condition_seed(base: u64, delay_index: usize, stiffness_index: usize, axis: Axis, trial: usize) -> u64 {
    let key = ((delay_index as u64) << 48)
        | ((stiffness_index as u64 & 0xFFFF) << 32)
        | (axis.code() << 31)
        | (trial as u64 & 0x7FFF_FFFF);
    base.wrapping_add(splitmix64(key))
}

/// Enumerates every condition in (delay, stiffness, axis, trial) order.
pub fn expand_grid(config: &GridConfig) -> Result<Vec<Condition>> {
    if config.delays.is_empty() {
        return Err(Error::Config("factor list `delays_s` is empty".into()));
    }
    if config.stiffness_levels.is_empty() {
        return Err(Error::Config("factor list `stiffness_levels` is empty".into()));
    }
    if config.axes.is_empty() {
        return Err(Error::Config("factor list `axes` is empty".into()));
    }
    if config.trials_per_cell == 0 {
        return Err(Error::Config("`trials_per_cell` must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(
        config.delays.len() * config.stiffness_levels.len() * config.axes.len() * config.trials_per_cell,
    );
    for (di, &delay) in config.delays.iter().enumerate() {
        for (ki, &k0) in config.stiffness_levels.iter().enumerate() {
            for &axis in &config.axes {
                for trial in 0..config.trials_per_cell {
                    out.push(Condition {
                        delay_index: di,
                        stiffness_index: ki,
                        delay,
                        novice_stiffness: k0,
                        axis,
                        trial,
                        seed: condition_seed(config.base_seed, di, ki, axis, trial),
                    });
                }
            }
        }
    }
    Ok(out)
}
