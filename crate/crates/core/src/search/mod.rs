//! Shared search bookkeeping: the state registry, the ordered open list,
//! the BE/CLOSED sets and the lock + change notification every planner
//! uses.

mod open;
mod registry;
mod shared;

pub use open::{OpenList, PriorityKey};
pub use registry::{ParentEdge, Registry, StateId, StateRecord, StateStatus};
pub use shared::{ChangeCounter, SearchState, SharedSearchState};

/// Action index of an edge. `DUMMY` stands in for all not-yet-inserted real
/// edges of a state and is never passed to a domain evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub u32);

impl ActionId {
    pub const DUMMY: ActionId = ActionId(u32::MAX);

    pub fn is_dummy(self) -> bool {
        self == Self::DUMMY
    }

    pub fn index(self) -> usize {
        debug_assert!(!self.is_dummy());
        self.0 as usize
    }
}

/// `(source, action)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: StateId,
    pub action: ActionId,
}

impl Edge {
    pub fn dummy(source: StateId) -> Self {
        Edge {
            source,
            action: ActionId::DUMMY,
        }
    }

    pub fn real(source: StateId, action: usize) -> Self {
        Edge {
            source,
            action: ActionId(action as u32),
        }
    }

    pub fn is_dummy(&self) -> bool {
        self.action.is_dummy()
    }
}
