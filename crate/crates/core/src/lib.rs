//! Transportation-model sourcing workbench.
//!
//! A [`Scenario`] holds three normalized tables (suppliers with capacities,
//! destinations with requirements, lanes with unit costs) plus the sourcing
//! plan. Everything else is derived from those tables:
//!
//! - [`ingest`] turns raw long-format supplier data into a scenario,
//! - [`eval`] computes supplied/delivered totals, total cost and diagnostics,
//! - [`mutate`] edits scenarios structurally without touching evaluation,
//! - [`report`] pivots the lane table into the supplier by destination matrix,
//! - [`solver`] finds minimum-cost plans.

pub mod eval;
pub mod ingest;
pub mod model;
pub mod money;
pub mod mutate;
pub mod report;
pub mod sample;
pub mod solver;

pub use eval::{evaluate, Diagnostic, DiagnosticKind, Evaluation};
pub use model::{
    lane_lookup, validate, DestinationRecord, Lane, LaneKey, Plan, Scenario, ScenarioDoc, Shipment,
    SupplierRecord, Units, Violation,
};
pub use money::Money;
pub use mutate::{apply_script, Mutation, MutationError};
pub use report::{matrix_report, MatrixReport};
pub use solver::{solve_min_cost, SolveResult, SolveStatus};
