//! Factorial experiment: grid expansion, trial execution, APE and summary
//! statistics.

mod grid;
mod run;
pub mod stats;
mod summary;

pub use grid::{expand_grid, Axis, Condition, GridConfig};
pub use run::{ape, run_condition, run_conditions, score_log, AxisPlant, TrialOutcome, TrialRecord, TrialSetup};
pub use summary::{summarize, SummaryRow, SIGNIFICANCE_LEVEL};
