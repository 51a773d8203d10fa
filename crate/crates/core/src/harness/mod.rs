//! Monte-Carlo experiments on the simulated array.

pub mod config;
pub mod metrics;
pub mod output;
pub mod runner;

pub use config::{load_scenario, parse_list, parse_methods, ExperimentConfig, Method};
pub use metrics::{per_indicator, rmse, squared_error};
pub use output::{to_csv, to_json, write_report};
pub use runner::{
    run_experiment, run_experiment_with, trial_paths, Execution, ExperimentReport, MethodAggregate, PathDump,
    SnrAggregate, TrialRecord,
};
