//! Experiment runner, metrics, brute-force oracles and report emitters.

pub mod config;
pub mod experiment;
pub mod oracle;
pub mod report;
pub mod suite;
pub mod svg;

pub use config::{load_config, parse_config};
pub use experiment::{
    png_ratio, run_experiment, AlgorithmConfig, ExperimentConfig, ExperimentResult, Metrics, ObjectiveSpec,
    OutputFormat,
};
pub use oracle::{brute_force_cell_min, brute_force_grid_min};
pub use report::{emit_table, parse_csv};
pub use svg::emit_trace_svg;
