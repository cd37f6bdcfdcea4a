//! Seeded experiment runner: spec files, instance construction, command
//! runners, scaling studies and CSV output.
//!
//! All randomness flows from `experiment.seed` through named streams, so the
//! same spec always yields byte-identical tables.

pub mod instances;
mod run;
pub mod scaling;
pub mod spec;
pub mod stats;
pub mod table;

pub use run::{run, RunOutput};
pub use scaling::{
    calibrate_point, measure, run_scaling, Measurement, ScalingConfig, ScalingPoint,
    ScalingResult, ScalingTester,
};
pub use spec::{Command, ExperimentSpec};
pub use table::{Table, CSV_VERSION};
