use std::fmt::Debug;
use std::hash::Hash;

/// Path and edge cost. Invalid edges carry [`INFINITE_COST`].
pub type Cost = f64;

pub const INFINITE_COST: Cost = f64::INFINITY;

/// Result of evaluating one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<S> {
    pub successor: S,
    pub cost: Cost,
}

/// A domain the planners search over.
///
/// Contract:
/// * `evaluate` is pure given `(state, action)` and safe to call from many
///   threads at once. It may be slow; it is the unit of parallel work.
///   `None` (or an infinite cost) marks an inapplicable or colliding action.
/// * `heuristic` is admissible and consistent.
/// * `pairwise_heuristic(s, s)` is 0, it never overestimates the cost of a
///   path from `from` to `to`, and it satisfies the triangle inequality
///   `h(a, c) <= h(a, b) + h(b, c)`. It is called while the search lock is
///   held and must be cheap and side-effect free.
pub trait SearchSpace: Sync {
    type State: Clone + Eq + Hash + Debug + Send + Sync;

    fn num_actions(&self, state: &Self::State) -> usize;

    fn evaluate(&self, state: &Self::State, action: usize) -> Option<Transition<Self::State>>;

    /// Same result as [`evaluate`](Self::evaluate) without any synthetic
    /// evaluation cost. Used by the oracle and instance generators.
    fn evaluate_without_delay(
        &self,
        state: &Self::State,
        action: usize,
    ) -> Option<Transition<Self::State>> {
        self.evaluate(state, action)
    }

    fn heuristic(&self, state: &Self::State) -> Cost;

    fn pairwise_heuristic(&self, from: &Self::State, to: &Self::State) -> Cost;

    fn is_goal(&self, state: &Self::State) -> bool;
}

impl<T: SearchSpace + ?Sized> SearchSpace for &T {
    type State = T::State;

    fn num_actions(&self, state: &Self::State) -> usize {
        (**self).num_actions(state)
    }

    fn evaluate(&self, state: &Self::State, action: usize) -> Option<Transition<Self::State>> {
        (**self).evaluate(state, action)
    }

    fn evaluate_without_delay(
        &self,
        state: &Self::State,
        action: usize,
    ) -> Option<Transition<Self::State>> {
        (**self).evaluate_without_delay(state, action)
    }

    fn heuristic(&self, state: &Self::State) -> Cost {
        (**self).heuristic(state)
    }

    fn pairwise_heuristic(&self, from: &Self::State, to: &Self::State) -> Cost {
        (**self).pairwise_heuristic(from, to)
    }

    fn is_goal(&self, state: &Self::State) -> bool {
        (**self).is_goal(state)
    }
}
