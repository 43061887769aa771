//! TuRBO-1 trust regions and the optimizer loops built on them.

mod optimizer;
mod state;

pub use optimizer::{
    run_optimizer, run_optimizer_observed, FnObjective, Objective, OptimizerVariant, RunConfig, RunEvent, RunRecord,
    RunRow, VariantName,
};
pub use state::{failure_tolerance, tr_box, tr_box_weighted, TrParams, TrustRegionState};
