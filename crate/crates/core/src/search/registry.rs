use std::collections::HashMap;
use std::hash::Hash;

use crate::error::SearchError;
use crate::space::{Cost, INFINITE_COST};

/// Dense index assigned to a domain state on first sight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateStatus {
    Undiscovered,
    /// In OPEN: the dummy edge for edge-based searches, the state itself
    /// for state-based ones.
    Open,
    /// In BE.
    PartiallyExpanded,
    Closed,
}

/// Back pointer: the edge that produced the current `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParentEdge {
    pub source: StateId,
    pub action: usize,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateRecord {
    pub g: Cost,
    pub h: Cost,
    pub parent: Option<ParentEdge>,
    pub n_successors_generated: u32,
    pub num_actions: u32,
    pub status: StateStatus,
}

impl StateRecord {
    fn fresh(h: Cost) -> Self {
        StateRecord {
            g: INFINITE_COST,
            h,
            parent: None,
            n_successors_generated: 0,
            num_actions: 0,
            status: StateStatus::Undiscovered,
        }
    }
}

/// Arena of [`StateRecord`]s indexed by [`StateId`].
#[derive(Debug, Clone)]
pub struct Registry<S> {
    keys: Vec<S>,
    records: Vec<StateRecord>,
    index: HashMap<S, StateId>,
}

impl<S> Default for Registry<S> {
    fn default() -> Self {
        Registry {
            keys: Vec::new(),
            records: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<S: Clone + Eq + Hash> Registry<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lookup(&self, key: &S) -> Option<StateId> {
        self.index.get(key).copied()
    }

    /// Returns the id of `key`, registering it with `g = inf` if new. The
    /// heuristic is only computed for new keys.
    pub fn get_or_insert_with(&mut self, key: &S, h: impl FnOnce() -> Cost) -> StateId {
        if let Some(&id) = self.index.get(key) {
            return id;
        }
        let id = StateId(self.records.len() as u32);
        self.keys.push(key.clone());
        self.records.push(StateRecord::fresh(h()));
        self.index.insert(key.clone(), id);
        id
    }

    pub fn get_or_insert(&mut self, key: &S, h: Cost) -> StateId {
        self.get_or_insert_with(key, || h)
    }

    pub fn key(&self, id: StateId) -> &S {
        &self.keys[id.index()]
    }

    pub fn record(&self, id: StateId) -> &StateRecord {
        &self.records[id.index()]
    }

    pub fn g(&self, id: StateId) -> Cost {
        self.records[id.index()].g
    }

    pub fn h(&self, id: StateId) -> Cost {
        self.records[id.index()].h
    }

    pub fn status(&self, id: StateId) -> StateStatus {
        self.records[id.index()].status
    }

    pub fn set_start(&mut self, id: StateId) {
        let rec = &mut self.records[id.index()];
        rec.g = 0.0;
        rec.parent = None;
    }

    /// Lowers `g` and sets the back pointer. Refuses to raise `g` or to
    /// touch a state already in BE or CLOSED.
    pub fn improve(&mut self, id: StateId, g: Cost, parent: ParentEdge) -> Result<(), SearchError> {
        let rec = &mut self.records[id.index()];
        let frozen = matches!(
            rec.status,
            StateStatus::PartiallyExpanded | StateStatus::Closed
        );
        if frozen || !(g < rec.g) {
            return Err(SearchError::IllegalGUpdate {
                state: id,
                old: rec.g,
                new: g,
            });
        }
        rec.g = g;
        rec.parent = Some(parent);
        Ok(())
    }

    pub(crate) fn transition(&mut self, id: StateId, to: StateStatus) -> Result<(), SearchError> {
        use StateStatus::*;
        let rec = &mut self.records[id.index()];
        let ok = matches!(
            (rec.status, to),
            (Undiscovered, Open)
                | (Open, Open)
                | (Open, PartiallyExpanded)
                | (PartiallyExpanded, Closed)
        );
        if !ok {
            return Err(SearchError::InvalidTransition {
                state: id,
                from: rec.status,
                to,
            });
        }
        rec.status = to;
        Ok(())
    }

    pub(crate) fn record_mut(&mut self, id: StateId) -> &mut StateRecord {
        &mut self.records[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.records.len() as u32).map(StateId)
    }
}
