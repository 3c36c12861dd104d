//! Loading, configuration, experiment grid and reports for the Cleveland
//! feature-selection benchmark.

pub mod config;
pub mod harness;
pub mod load;
pub mod report;

pub use config::{ExperimentConfig, Format, Protocol, SelectionScope};
pub use harness::{run_experiment, run_on_dataset, Report, ReportRow, RowStatus};
pub use load::{load_cleveland, load_cleveland_str, LoadError};
pub use report::{emit_confusion, emit_report};
