//! Config-driven experiment runner.

pub mod cli;
pub mod config;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, Format, Mode, PRESETS};
pub use report::{emit, read_json, write_csv, write_json, write_plotdata, CSV_HEADER};
pub use run::{compare_backends, run, validate, Comparison, Record, Report, Verdict};
