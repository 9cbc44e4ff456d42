//! Configuration-driven experiment runner: JSON config in, JSON report and
//! raw field dumps out.

pub mod config;
pub mod dump;
pub mod experiments;
pub mod report;

pub use config::{ConfigError, Experiment, ExperimentConfig};
pub use experiments::{run_experiment, RunError};
pub use report::RunReport;
