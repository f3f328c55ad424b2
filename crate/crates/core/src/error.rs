use thiserror::Error;

use crate::search::{Edge, StateId, StateStatus};
use crate::space::Cost;

/// Internal-consistency and configuration failures of a search run.
///
/// A planner that cannot find a path reports it through
/// [`Outcome`](crate::Outcome), not through this type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("{0:?} is not in OPEN")]
    NotInOpen(String),

    #[error("reposition would raise f from {old} to {new}")]
    KeyIncrease { old: Cost, new: Cost },

    #[error("state {state:?} cannot move from {from:?} to {to:?}")]
    InvalidTransition {
        state: StateId,
        from: StateStatus,
        to: StateStatus,
    },

    #[error("state {state:?} closed after {generated} of {actions} successors")]
    PrematureClose {
        state: StateId,
        generated: u32,
        actions: u32,
    },

    #[error("g of state {state:?} cannot change from {old} to {new}")]
    IllegalGUpdate { state: StateId, old: Cost, new: Cost },

    #[error("edge {0:?} was evaluated more than once")]
    Reexpansion(Edge),

    #[error("parent chain broken at state {0:?}")]
    BrokenParentChain(StateId),

    #[error("worker thread panicked: {0}")]
    WorkerPanicked(String),

    #[error("oracle refused: more than {limit} states")]
    OracleBudgetExceeded { limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instance generator gave up after {attempts} attempts")]
    GeneratorGaveUp { attempts: usize },
}
