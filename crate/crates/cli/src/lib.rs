//! Experiment runner for lexnet: configuration, the individual analyses,
//! and their tab-separated outputs.

pub mod config;
pub mod experiments;

pub use config::{CurveConfig, ExperimentConfig, ExperimentKind};
