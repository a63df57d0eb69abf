//! Adaptive refinement loop, uniform and graded-mesh studies, and the
//! convergence records they produce.

mod config;
mod demo;
mod driver;
mod marking;
mod record;

pub use config::{initial_mesh, uniform_mesh, AmrConfig, DualMesh, EstimatorKind};
pub use demo::{weight_demo, WeightDemo};
pub use driver::{
    amr_loop, amr_loop_with, count_dofs, flux_dual_error, pw_study, pw_study_with, uniform_study,
    uniform_study_with, StepView,
};
pub use marking::{mark, mark_strict};
pub use record::{observed_rates, regression_slope, ConvergenceRecord, StepRecord};

#[cfg(test)]
mod tests;
