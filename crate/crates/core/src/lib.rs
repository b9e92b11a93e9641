//! Simulation and stiffness estimation for delayed, robot-mediated dyadic
//! interaction.
//!
//! Two 1-D mass-spring-damper interfaces (expert and novice) are joined by a
//! virtual spring across a channel with constant one-way delay. The expert
//! tracks a sinusoid under impedance control; the novice is a linear spring
//! whose stiffness is estimated from what the expert side can observe.
//!
//! - [`sim`]: fixed-step integration of the delayed coupled plant.
//! - [`estimators`]: Naive, delay-compensated OLS, NWLS and reference fits.
//! - [`oracle`]: closed-form quasi-static signals and bias predictions.
//! - [`experiment`]: factorial trial grid, APE and rank-sum statistics.
//! - [`config`] and [`output`]: the file formats used by the CLI.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod oracle;
pub mod output;
pub mod sim;

pub use error::{Error, Result};
