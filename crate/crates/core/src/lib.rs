//! Edge-parallel heuristic search.
//!
//! The crate provides a family of best-first planners that share one
//! search-space abstraction:
//!
//! * serial A* / weighted A* over states,
//! * serial edge-based A* (`EAStar`), whose open list holds edges and
//!   which evaluates an edge only when it reaches the front of the queue,
//! * PwA*, weighted A* with the outgoing edges of each expansion
//!   evaluated concurrently,
//! * wPA*SE, which expands independent states in parallel,
//! * ePA*SE, which evaluates independent edges in parallel.
//!
//! The parallel planners use the independence test in [`independence`] to
//! decide which element of OPEN may be expanded out of priority order
//! without giving up the `max(epsilon, w)` bound on the cost of every
//! expanded state.
//!
//! [`domain`] holds concrete search spaces (lattice grid navigation with a
//! synthetic evaluation delay, explicit graphs) and [`oracle`] an
//! independent uniform-cost search used for ground truth.

pub mod domain;
pub mod error;
pub mod independence;
pub mod oracle;
pub mod planner;
pub mod search;
pub mod space;

pub use error::SearchError;
pub use planner::{
    plan, Algorithm, AuditLog, Outcome, PathEdge, PlannerConfig, RunStats, SearchResult,
    ThreadManagement,
};
pub use space::{Cost, SearchSpace, Transition, INFINITE_COST};
