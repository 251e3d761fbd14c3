//! Reproducible Monte Carlo sweeps: configuration, parallel execution,
//! aggregation and flat-file output.

mod config;
mod connectivity;
mod output;
mod run;
mod summary;

pub use config::{AxisName, ExperimentConfig, ExperimentSection, ModelSection, PgfSection, Pipeline, SolverSection, SweepAxis};
pub use connectivity::{connectivity_check, Connectivity};
pub use output::{csv_columns, read_records_csv, records_to_csv, write_manifest, write_outputs, Manifest, CSV_SCHEMA};
pub use run::{run_sweep, run_sweep_with_threads, run_trial, sweep_points, thread_count, SweepPoint, TrialRecord, THREADS_ENV};
pub use summary::{summarize, wilson_interval, PointSummary, WILSON_Z};
