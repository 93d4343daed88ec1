//! Goal-network search, the classical baseline, validation and the exact
//! reference solver.

mod classical;
mod hopgdp;
mod metrics;
mod oracle;
mod registry;
mod successors;
mod trace;
mod validate;

pub use classical::classical_astar;
pub use hopgdp::{hopgdp, ExpandObserver, SearchOptions};
pub use metrics::{
    AbortReason, Budget, DeterministicMetrics, Outcome, SearchMetrics, SearchResult, Solution,
};
pub use oracle::{oracle_optimal_cost, OracleResult};
pub use registry::{Planner, PlannerRegistry};
pub use successors::{get_successors, Step, Successor};
pub use trace::{trace_from_json, trace_to_json, DecompositionTrace, TraceStep};
pub use validate::{validate, Validated, Violation};
