//! Fixed-step simulation of the delayed expert/novice plant.

mod delay;
mod params;
mod plant;
mod trial;

pub use delay::DelayLine;
pub use params::PlantParams;
pub use plant::{Sample, SimState, FRICTION_VELOCITY_SCALE};
pub use trial::{simulate_trial, TrialLog};
