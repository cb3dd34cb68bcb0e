//! Experiment configuration, parameter sweeps and CSV output.

mod config;
mod experiment;
mod output;

pub use config::{
    load_config, save_config, Axis, Curve, DeploymentSection, Experiment, FadingName, OcclusionName, RadioSection,
    RoadSection, SimSection, SteeringName, SweepSection, VariantName,
};
pub use experiment::{mean_squared_difference, run_experiment, ResultRow, ResultTable};
pub use output::{emit_csv, read_csv, write_csv, write_trace, RESULT_COLUMNS};
