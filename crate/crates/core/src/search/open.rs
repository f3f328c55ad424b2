use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::ops::Bound;

use crate::error::SearchError;
use crate::space::Cost;

/// Ordering key of an OPEN entry: smaller `f` first, then larger `g`, then
/// earlier insertion.
#[derive(Debug, Clone, Copy)]
pub struct PriorityKey {
    pub f: Cost,
    pub g: Cost,
    pub seq: u64,
}

impl Ord for PriorityKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.f
            .total_cmp(&other.f)
            .then_with(|| other.g.total_cmp(&self.g))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for PriorityKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for PriorityKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PriorityKey {}

/// Ordered open list with decrease-key and in-order traversal.
///
/// Backed by a B-tree keyed on [`PriorityKey`] plus an item index, so that
/// the independence scan can walk every entry preceding a candidate without
/// popping anything.
#[derive(Debug, Clone)]
pub struct OpenList<T> {
    entries: BTreeMap<PriorityKey, T>,
    index: HashMap<T, PriorityKey>,
    next_seq: u64,
}

impl<T> Default for OpenList<T> {
    fn default() -> Self {
        OpenList {
            entries: BTreeMap::new(),
            index: HashMap::new(),
            next_seq: 0,
        }
    }
}

impl<T: Copy + Eq + Hash + std::fmt::Debug> OpenList<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, item: &T) -> bool {
        self.index.contains_key(item)
    }

    pub fn key_of(&self, item: &T) -> Option<PriorityKey> {
        self.index.get(item).copied()
    }

    /// Inserts `item` at `(f, g)`, or moves it there if already present.
    /// Moving to a strictly larger `f` is rejected.
    pub fn insert_or_reposition(&mut self, item: T, f: Cost, g: Cost) -> Result<(), SearchError> {
        if let Some(old) = self.index.get(&item).copied() {
            if f > old.f {
                return Err(SearchError::KeyIncrease { old: old.f, new: f });
            }
            self.entries.remove(&old);
        }
        let key = PriorityKey {
            f,
            g,
            seq: self.next_seq,
        };
        self.next_seq += 1;
        self.entries.insert(key, item);
        self.index.insert(item, key);
        Ok(())
    }

    pub fn remove(&mut self, item: &T) -> Result<PriorityKey, SearchError> {
        let key = self
            .index
            .remove(item)
            .ok_or_else(|| SearchError::NotInOpen(format!("{item:?}")))?;
        self.entries.remove(&key);
        Ok(key)
    }

    pub fn peek_min(&self) -> Option<(PriorityKey, T)> {
        self.entries.first_key_value().map(|(k, v)| (*k, *v))
    }

    pub fn pop_min(&mut self) -> Option<(PriorityKey, T)> {
        let (key, item) = self.entries.pop_first()?;
        self.index.remove(&item);
        Some((key, item))
    }

    /// Every entry in nondecreasing key order.
    pub fn iter(&self) -> impl Iterator<Item = (&PriorityKey, &T)> + '_ {
        self.entries.iter()
    }

    /// Entries whose key strictly precedes `key`.
    pub fn iter_before(&self, key: PriorityKey) -> impl Iterator<Item = (&PriorityKey, &T)> + '_ {
        self.entries.range((Bound::Unbounded, Bound::Excluded(key)))
    }
}
