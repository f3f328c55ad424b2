use std::hash::Hash;
use std::sync::{Condvar, Mutex, MutexGuard};
use std::time::Instant;

use indexmap::IndexSet;

use super::{Edge, OpenList, Registry, StateId, StateStatus};
use crate::error::SearchError;
use crate::space::Cost;

/// OPEN, BE and CLOSED plus the state registry.
///
/// `T` is the OPEN payload: [`Edge`] for the edge-based planners,
/// [`StateId`] for the state-based ones. Every mutation of OPEN or BE bumps
/// a generation counter that waiters compare against.
#[derive(Debug)]
pub struct SearchState<S, T = Edge> {
    pub registry: Registry<S>,
    pub open: OpenList<T>,
    be: IndexSet<StateId>,
    closed: usize,
    pub terminate: bool,
    generation: u64,
}

impl<S, T> Default for SearchState<S, T> {
    fn default() -> Self {
        SearchState {
            registry: Registry::default(),
            open: OpenList::default(),
            be: IndexSet::new(),
            closed: 0,
            terminate: false,
            generation: 0,
        }
    }
}

impl<S, T> SearchState<S, T>
where
    S: Clone + Eq + Hash,
    T: Copy + Eq + Hash + std::fmt::Debug,
{
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn bump(&mut self) {
        self.generation += 1;
    }

    pub fn be(&self) -> &IndexSet<StateId> {
        &self.be
    }

    pub fn closed_len(&self) -> usize {
        self.closed
    }

    pub fn in_be(&self, id: StateId) -> bool {
        self.registry.status(id) == StateStatus::PartiallyExpanded
    }

    pub fn is_closed(&self, id: StateId) -> bool {
        self.registry.status(id) == StateStatus::Closed
    }

    /// `g + w * h` of a registered state.
    pub fn priority(&self, id: StateId, weight: f64) -> Cost {
        let rec = self.registry.record(id);
        rec.g + weight * rec.h
    }

    pub fn open_insert_or_reposition(&mut self, item: T, f: Cost, g: Cost) -> Result<(), SearchError> {
        self.open.insert_or_reposition(item, f, g)?;
        self.bump();
        Ok(())
    }

    pub fn open_remove(&mut self, item: &T) -> Result<(), SearchError> {
        self.open.remove(item)?;
        self.bump();
        Ok(())
    }

    /// OPEN -> BE.
    pub fn mark_partially_expanded(&mut self, id: StateId) -> Result<(), SearchError> {
        self.registry.transition(id, StateStatus::PartiallyExpanded)?;
        self.be.insert(id);
        self.bump();
        Ok(())
    }

    /// BE -> CLOSED. The state's successor counter must have reached its
    /// action count.
    pub fn mark_closed(&mut self, id: StateId) -> Result<(), SearchError> {
        let rec = self.registry.record(id);
        if rec.status == StateStatus::PartiallyExpanded
            && rec.n_successors_generated != rec.num_actions
        {
            return Err(SearchError::PrematureClose {
                state: id,
                generated: rec.n_successors_generated,
                actions: rec.num_actions,
            });
        }
        self.registry.transition(id, StateStatus::Closed)?;
        self.be.swap_remove(&id);
        self.closed += 1;
        self.bump();
        Ok(())
    }

    /// Counts one more finished successor of `id`; closes it when all are
    /// done. Returns whether the state was closed.
    pub fn successor_done(&mut self, id: StateId) -> Result<bool, SearchError> {
        let rec = self.registry.record_mut(id);
        rec.n_successors_generated += 1;
        if rec.n_successors_generated == rec.num_actions {
            self.mark_closed(id)?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub(crate) fn set_num_actions(&mut self, id: StateId, n: usize) {
        self.registry.record_mut(id).num_actions = n as u32;
    }
}

impl<S: Clone + Eq + Hash> SearchState<S, Edge> {
    /// Registers the start state with `g = 0` and puts its dummy edge in
    /// OPEN.
    pub fn insert_start(&mut self, key: &S, h: Cost, weight: f64) -> Result<StateId, SearchError> {
        let id = self.registry.get_or_insert(key, h);
        self.registry.set_start(id);
        self.push_dummy(id, weight)?;
        Ok(id)
    }

    /// Inserts or repositions the dummy edge of `id` at `g + w * h`.
    pub fn push_dummy(&mut self, id: StateId, weight: f64) -> Result<(), SearchError> {
        self.registry.transition(id, StateStatus::Open)?;
        let f = self.priority(id, weight);
        let g = self.registry.g(id);
        self.open_insert_or_reposition(Edge::dummy(id), f, g)
    }

    /// Replaces the (already removed) dummy edge of `id` by its real edges,
    /// all at the dummy's priority, and moves `id` into BE. A state without
    /// actions is closed immediately.
    pub fn expand_dummy(&mut self, id: StateId, num_actions: usize, weight: f64) -> Result<(), SearchError> {
        self.mark_partially_expanded(id)?;
        self.set_num_actions(id, num_actions);
        let f = self.priority(id, weight);
        let g = self.registry.g(id);
        for a in 0..num_actions {
            self.open_insert_or_reposition(Edge::real(id, a), f, g)?;
        }
        if num_actions == 0 {
            self.mark_closed(id)?;
        }
        Ok(())
    }
}

impl<S: Clone + Eq + Hash> SearchState<S, StateId> {
    /// Inserts or repositions state `id` in OPEN at `g + w * h`.
    pub fn push_state(&mut self, id: StateId, weight: f64) -> Result<(), SearchError> {
        self.registry.transition(id, StateStatus::Open)?;
        let f = self.priority(id, weight);
        let g = self.registry.g(id);
        self.open_insert_or_reposition(id, f, g)
    }
}

/// What [`SharedSearchState::wait_for_change`] needs from the locked value.
pub trait ChangeCounter {
    fn generation(&self) -> u64;
    fn terminated(&self) -> bool;
}

impl<S, T> ChangeCounter for SearchState<S, T> {
    fn generation(&self) -> u64 {
        self.generation
    }

    fn terminated(&self) -> bool {
        self.terminate
    }
}

/// Search bookkeeping behind the single search lock, with the "OPEN or BE
/// changed" notification. `I` is [`SearchState`] or a planner struct that
/// wraps one.
#[derive(Debug)]
pub struct SharedSearchState<I> {
    state: Mutex<I>,
    changed: Condvar,
}

impl<I: ChangeCounter> SharedSearchState<I> {
    pub fn new(state: I) -> Self {
        SharedSearchState {
            state: Mutex::new(state),
            changed: Condvar::new(),
        }
    }

    /// A poisoned lock is recovered: panics are reported separately by the
    /// planners.
    pub fn lock(&self) -> MutexGuard<'_, I> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn notify(&self) {
        self.changed.notify_all();
    }

    /// Blocks until the generation moves past `seen`, termination is
    /// flagged, or `deadline` passes.
    pub fn wait_for_change<'a>(
        &'a self,
        mut guard: MutexGuard<'a, I>,
        seen: u64,
        deadline: Instant,
    ) -> MutexGuard<'a, I> {
        while guard.generation() == seen && !guard.terminated() {
            let now = Instant::now();
            if now >= deadline {
                break;
            }
            guard = match self.changed.wait_timeout(guard, deadline - now) {
                Ok((g, _)) => g,
                Err(e) => e.into_inner().0,
            };
        }
        guard
    }

    /// Like [`wait_for_change`](Self::wait_for_change) but polls: drops the
    /// lock, spins, and re-locks.
    pub fn poll_for_change<'a>(
        &'a self,
        mut guard: MutexGuard<'a, I>,
        seen: u64,
        deadline: Instant,
    ) -> MutexGuard<'a, I> {
        while guard.generation() == seen && !guard.terminated() && Instant::now() < deadline {
            drop(guard);
            std::hint::spin_loop();
            std::thread::yield_now();
            guard = self.lock();
        }
        guard
    }

    pub fn into_inner(self) -> I {
        self.state.into_inner().unwrap_or_else(|e| e.into_inner())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state_with(keys: &[u8]) -> (SearchState<u8>, Vec<StateId>) {
        let mut st = SearchState::new();
        let ids = keys
            .iter()
            .map(|k| st.registry.get_or_insert(k, 0.0))
            .collect();
        (st, ids)
    }

    #[test]
    fn dummy_expansion_enters_be() {
        let mut st = SearchState::new();
        let s = st.insert_start(&0u8, 2.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s)).unwrap();
        st.expand_dummy(s, 3, 1.0).unwrap();
        assert!(st.in_be(s));
        assert!(!st.is_closed(s));
        let fs: Vec<f64> = st.open.iter().map(|(k, _)| k.f).collect();
        assert_eq!(fs, vec![2.0; 3]);
    }

    #[test]
    fn last_successor_closes() {
        let mut st = SearchState::new();
        let s = st.insert_start(&0u8, 0.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s)).unwrap();
        st.expand_dummy(s, 2, 1.0).unwrap();
        assert!(!st.successor_done(s).unwrap());
        assert!(st.successor_done(s).unwrap());
        assert!(!st.in_be(s));
        assert!(st.is_closed(s));
        assert!(st.be().is_empty());
        assert_eq!(st.closed_len(), 1);
    }

    #[test]
    fn closing_undiscovered_state_fails() {
        let (mut st, ids) = state_with(&[7]);
        assert!(st.mark_closed(ids[0]).is_err());
    }

    #[test]
    fn closing_early_fails() {
        let mut st = SearchState::new();
        let s = st.insert_start(&0u8, 0.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s)).unwrap();
        st.expand_dummy(s, 2, 1.0).unwrap();
        assert!(matches!(
            st.mark_closed(s),
            Err(SearchError::PrematureClose { .. })
        ));
    }

    #[test]
    fn actionless_state_closes_at_once() {
        let mut st = SearchState::new();
        let s = st.insert_start(&0u8, 0.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s)).unwrap();
        st.expand_dummy(s, 0, 1.0).unwrap();
        assert!(st.is_closed(s));
        assert!(st.open.is_empty());
    }

    #[test]
    fn mutations_bump_generation() {
        let mut st = SearchState::new();
        let g0 = st.generation();
        let s = st.insert_start(&0u8, 0.0, 1.0).unwrap();
        let g1 = st.generation();
        assert!(g1 > g0);
        st.open_remove(&Edge::dummy(s)).unwrap();
        assert!(st.generation() > g1);
    }

    #[test]
    fn wait_returns_on_change() {
        use std::sync::Arc;
        use std::time::Duration;
        let shared = Arc::new(SharedSearchState::new(SearchState::<u8>::new()));
        assert!(!shared.lock().terminated());
        let seen = shared.lock().generation();
        let other = Arc::clone(&shared);
        let t = std::thread::spawn(move || {
            std::thread::sleep(Duration::from_millis(20));
            other.lock().bump();
            other.notify();
        });
        let guard = shared.lock();
        let guard = shared.wait_for_change(guard, seen, Instant::now() + Duration::from_secs(10));
        assert!(guard.generation() > seen);
        drop(guard);
        t.join().unwrap();
    }
}
