//! Registered benchmark problems and the manifest-driven study runner.

mod manifest;
pub mod metric;
mod problems;
mod runner;
pub mod svg;

pub use manifest::{Assertion, Manifest, Relative, Study, StudyKind};
pub use problems::{problem, PROBLEMS};
pub use runner::{
    format_report, run_manifest, run_study, study_plot, write_table, AssertionOutcome, RunOptions,
    RunReport,
};
