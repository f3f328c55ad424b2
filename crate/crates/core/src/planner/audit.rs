use std::collections::HashMap;
use std::hash::Hash;

use crate::space::Cost;

/// One selection made by a planner.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<S> {
    pub state: S,
    /// g of the selected element's source at selection time.
    pub g: Cost,
    pub dummy: bool,
    /// Position of the selected element in OPEN order (0 = front).
    pub rank: usize,
    pub be_len: usize,
}

/// Debug record of a run.
#[derive(Debug, Clone)]
pub struct AuditLog<S> {
    pub evaluations: HashMap<(S, usize), u32>,
    pub closings: HashMap<S, u32>,
    pub selections: Vec<Selection<S>>,
}

impl<S> Default for AuditLog<S> {
    fn default() -> Self {
        AuditLog {
            evaluations: HashMap::new(),
            closings: HashMap::new(),
            selections: Vec::new(),
        }
    }
}

impl<S: Clone + Eq + Hash> AuditLog<S> {
    pub fn record_evaluation(&mut self, state: &S, action: usize) {
        *self.evaluations.entry((state.clone(), action)).or_default() += 1;
    }

    pub fn record_closing(&mut self, state: &S) {
        *self.closings.entry(state.clone()).or_default() += 1;
    }

    /// Real edges evaluated more than once.
    pub fn duplicate_evaluations(&self) -> usize {
        self.evaluations.values().filter(|&&n| n > 1).count()
    }

    /// States closed more than once.
    pub fn duplicate_closings(&self) -> usize {
        self.closings.values().filter(|&&n| n > 1).count()
    }
}
