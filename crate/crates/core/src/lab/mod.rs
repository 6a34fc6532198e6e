//! Experiment configs, verification suites and their reports.
mod config;
mod report;
mod suites;

pub use config::{BodyPair, Experiment, ExperimentConfig, Knobs, NormSpec};
pub use report::{Metadata, Report, Row};
pub use suites::{run, run_all, run_girth2d, run_girth3d, run_grassmann, run_htvol};
