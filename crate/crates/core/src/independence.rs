//! Safety tests for expanding an OPEN element out of priority order.
//!
//! A state `s` is independent of `s'` when `g(s) - g(s') <= eps * h(s', s)`:
//! expanding `s'` can then no longer lower `g(s)` below the bound. An
//! element of OPEN is safe to expand when its source is independent of
//! every state in BE and of the sources of every OPEN element that precedes
//! it (or of all OPEN elements when `full_open_scan` is set, which is
//! required once `w > eps`).

use std::hash::Hash;

use indexmap::IndexSet;

use crate::error::SearchError;
use crate::search::{Edge, OpenList, Registry, SearchState, StateId};
use crate::space::{Cost, SearchSpace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceParams {
    pub epsilon: f64,
    pub weight: f64,
    pub full_open_scan: bool,
}

impl IndependenceParams {
    /// `full_open_scan` is forced on when `weight > epsilon`.
    pub fn new(epsilon: f64, weight: f64, full_open_scan: bool) -> Result<Self, SearchError> {
        if !(epsilon >= 1.0) || !(weight >= 1.0) || weight.is_infinite() {
            return Err(SearchError::InvalidConfig(format!(
                "need epsilon >= 1 and finite weight >= 1, got epsilon={epsilon} weight={weight}"
            )));
        }
        Ok(IndependenceParams {
            epsilon,
            weight,
            full_open_scan: full_open_scan || weight > epsilon,
        })
    }
}

/// `g_s - g_s_prime <= epsilon * h_pair`, with `inf * 0` read as 0.
pub fn state_independent(g_s: Cost, g_s_prime: Cost, h_pair: Cost, epsilon: f64) -> bool {
    let slack = if h_pair == 0.0 { 0.0 } else { epsilon * h_pair };
    g_s - g_s_prime <= slack
}

/// Per-round visit marks over state ids.
#[derive(Debug, Default, Clone)]
pub struct SourceMemo {
    stamps: Vec<u32>,
    epoch: u32,
}

impl SourceMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Marks `id`; true if it was not marked since the last `clear`.
    pub fn insert(&mut self, id: StateId) -> bool {
        let i = id.index();
        if i >= self.stamps.len() {
            self.stamps.resize(i + 1, 0);
        }
        if self.stamps[i] == self.epoch {
            false
        } else {
            self.stamps[i] = self.epoch;
            true
        }
    }

    pub fn contains(&self, id: StateId) -> bool {
        self.stamps.get(id.index()) == Some(&self.epoch)
    }
}

fn independent_of<S, Sp>(
    s: StateId,
    other: StateId,
    registry: &Registry<S>,
    space: &Sp,
    epsilon: f64,
) -> bool
where
    S: Clone + Eq + Hash,
    Sp: SearchSpace<State = S>,
{
    let h_pair = space.pairwise_heuristic(registry.key(other), registry.key(s));
    state_independent(registry.g(s), registry.g(other), h_pair, epsilon)
}

/// Full check of one OPEN element, straight from the definition. The
/// candidate's own source is excluded and each other source is checked
/// once.
pub fn element_safe_to_expand<S, T, Sp>(
    candidate: T,
    source_of: impl Fn(&T) -> StateId,
    open: &OpenList<T>,
    be: &IndexSet<StateId>,
    registry: &Registry<S>,
    space: &Sp,
    params: &IndependenceParams,
    memo: &mut SourceMemo,
) -> bool
where
    S: Clone + Eq + Hash,
    T: Copy + Eq + Hash + std::fmt::Debug,
    Sp: SearchSpace<State = S>,
{
    let Some(key) = open.key_of(&candidate) else {
        return false;
    };
    let s = source_of(&candidate);
    memo.clear();
    memo.insert(s);
    let blocking: Box<dyn Iterator<Item = (_, &T)>> = if params.full_open_scan {
        Box::new(open.iter())
    } else {
        Box::new(open.iter_before(key))
    };
    for (_, e) in blocking {
        let other = source_of(e);
        if memo.insert(other) && !independent_of(s, other, registry, space, params.epsilon) {
            return false;
        }
    }
    be.iter()
        .all(|&other| !memo.insert(other) || independent_of(s, other, registry, space, params.epsilon))
}

/// Whether `candidate` (an edge in OPEN) is safe to expand.
pub fn edge_safe_to_expand<Sp: SearchSpace>(
    candidate: Edge,
    state: &SearchState<Sp::State, Edge>,
    space: &Sp,
    params: &IndependenceParams,
    memo: &mut SourceMemo,
) -> bool {
    element_safe_to_expand(
        candidate,
        |e: &Edge| e.source,
        &state.open,
        state.be(),
        &state.registry,
        space,
        params,
        memo,
    )
}

/// Scratch space for [`select_safe`].
#[derive(Debug, Default)]
pub struct SelectScratch {
    seen: SourceMemo,
    failed: SourceMemo,
    prefix: Vec<StateId>,
}

impl SelectScratch {
    pub fn new() -> Self {
        Self::default()
    }
}

/// First OPEN element, in key order, that is safe to expand.
///
/// Gives the same answer as running [`element_safe_to_expand`] on each
/// element in order, but tests each distinct source at most once per call:
/// the set of sources preceding a candidate only grows along the walk, so a
/// source that fails once fails for all of its later elements, and the
/// first source that passes ends the walk.
pub fn select_safe<S, T, Sp>(
    open: &OpenList<T>,
    source_of: impl Fn(&T) -> StateId,
    be: &IndexSet<StateId>,
    registry: &Registry<S>,
    space: &Sp,
    params: &IndependenceParams,
    scratch: &mut SelectScratch,
) -> Option<T>
where
    S: Clone + Eq + Hash,
    T: Copy + Eq + Hash + std::fmt::Debug,
    Sp: SearchSpace<State = S>,
{
    let SelectScratch {
        seen,
        failed,
        prefix,
    } = scratch;
    seen.clear();
    failed.clear();
    prefix.clear();
    if params.full_open_scan {
        for (_, e) in open.iter() {
            let s = source_of(e);
            if seen.insert(s) {
                prefix.push(s);
            }
        }
    }
    let eps = params.epsilon;
    for (_, e) in open.iter() {
        let s = source_of(e);
        if failed.contains(s) {
            continue;
        }
        let ok = be
            .iter()
            .all(|&o| o == s || independent_of(s, o, registry, space, eps))
            && prefix
                .iter()
                .all(|&o| o == s || independent_of(s, o, registry, space, eps));
        if ok {
            return Some(*e);
        }
        failed.insert(s);
        if !params.full_open_scan && seen.insert(s) {
            prefix.push(s);
        }
    }
    None
}

/// [`select_safe`] over an edge OPEN list.
pub fn select_safe_edge<Sp: SearchSpace>(
    state: &SearchState<Sp::State, Edge>,
    space: &Sp,
    params: &IndependenceParams,
    scratch: &mut SelectScratch,
) -> Option<Edge> {
    select_safe(
        &state.open,
        |e: &Edge| e.source,
        state.be(),
        &state.registry,
        space,
        params,
        scratch,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ExplicitGraph;
    use crate::search::StateStatus;

    #[test]
    fn direct_inequality() {
        assert!(state_independent(5.0, 3.0, 3.0, 1.0));
        assert!(!state_independent(5.0, 3.0, 1.0, 1.0));
        assert!(state_independent(5.0, 3.0, 1.0, 5.0));
        assert!(state_independent(5.0, 5.0, 0.0, f64::INFINITY));
        assert!(!state_independent(5.0, 3.0, 0.0, f64::INFINITY));
        assert!(state_independent(50.0, 3.0, 0.1, f64::INFINITY));
    }

    #[test]
    fn params_force_full_scan() {
        assert!(!IndependenceParams::new(5.0, 5.0, false).unwrap().full_open_scan);
        assert!(IndependenceParams::new(1.5, 3.0, false).unwrap().full_open_scan);
        assert!(IndependenceParams::new(0.5, 1.0, false).is_err());
        assert!(IndependenceParams::new(1.0, f64::NAN, false).is_err());
    }

    #[test]
    fn lone_candidate_is_safe() {
        let g = ExplicitGraph::new(1);
        let mut st: SearchState<usize> = SearchState::new();
        st.insert_start(&0, 0.0, 1.0).unwrap();
        let params = IndependenceParams::new(1.0, 1.0, false).unwrap();
        let mut memo = SourceMemo::new();
        assert!(edge_safe_to_expand(Edge::dummy(StateId(0)), &st, &g, &params, &mut memo));
    }

    #[test]
    fn be_state_blocks_candidate() {
        let mut g = ExplicitGraph::new(2);
        g.set_positions(vec![(0.0, 0.0), (3.0, 0.0)]);
        let mut st: SearchState<usize> = SearchState::new();
        let cand = st.registry.get_or_insert(&0, 0.0);
        let other = st.registry.get_or_insert(&1, 0.0);
        st.registry.record_mut(cand).g = 10.0;
        st.registry.record_mut(other).g = 2.0;
        st.push_dummy(cand, 1.0).unwrap();
        st.push_dummy(other, 1.0).unwrap();
        st.open_remove(&Edge::dummy(other)).unwrap();
        st.expand_dummy(other, 1, 1.0).unwrap();
        st.open_remove(&Edge::real(other, 0)).unwrap();
        let mut memo = SourceMemo::new();
        let eps1 = IndependenceParams::new(1.0, 1.0, false).unwrap();
        assert!(!edge_safe_to_expand(Edge::dummy(cand), &st, &g, &eps1, &mut memo));
        let eps3 = IndependenceParams::new(3.0, 1.0, false).unwrap();
        assert!(edge_safe_to_expand(Edge::dummy(cand), &st, &g, &eps3, &mut memo));
    }

    #[test]
    fn chain_first_edge_is_safe() {
        let mut g = ExplicitGraph::new(3);
        g.add_edge(0, 1, 1.0).add_edge(1, 2, 1.0).set_goal(2);
        g.set_heuristic(vec![0.0; 3]);
        let mut st: SearchState<usize> = SearchState::new();
        let s0 = st.insert_start(&0, 0.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s0)).unwrap();
        st.expand_dummy(s0, 1, 1.0).unwrap();
        let params = IndependenceParams::new(1.0, 1.0, false).unwrap();
        let mut memo = SourceMemo::new();
        let e01 = Edge::real(s0, 0);
        assert_eq!(st.open.peek_min().unwrap().1, e01);
        assert!(edge_safe_to_expand(e01, &st, &g, &params, &mut memo));
        let mut scratch = SelectScratch::new();
        assert_eq!(select_safe_edge(&st, &g, &params, &mut scratch), Some(e01));
    }

    use proptest::prelude::*;

    /// A random OPEN/BE configuration over `n` states with integer
    /// positions and a goal at the origin.
    #[derive(Debug, Clone)]
    struct Scenario {
        positions: Vec<(i32, i32)>,
        g: Vec<u32>,
        /// (state, action or None for dummy, f in eighths)
        open: Vec<(usize, Option<usize>, u32)>,
        be: Vec<usize>,
    }

    fn scenario() -> impl Strategy<Value = Scenario> {
        (2usize..9).prop_flat_map(|n| {
            (
                proptest::collection::vec((-6i32..7, -6i32..7), n),
                proptest::collection::vec(0u32..80, n),
                proptest::collection::vec((0..n, proptest::option::of(0usize..3), 0u32..200), 1..12),
                proptest::collection::vec(0..n, 0..4),
            )
                .prop_map(|(positions, g, open, be)| Scenario { positions, g, open, be })
        })
    }

    fn build(sc: &Scenario) -> (ExplicitGraph, SearchState<usize>) {
        let n = sc.positions.len();
        let mut graph = ExplicitGraph::new(n);
        graph.set_positions(sc.positions.iter().map(|&(x, y)| (x as f64, y as f64)).collect());
        let mut st: SearchState<usize> = SearchState::new();
        for k in 0..n {
            let id = st.registry.get_or_insert(&k, 0.0);
            st.registry.record_mut(id).g = sc.g[k] as f64 / 8.0;
        }
        for &b in &sc.be {
            let id = StateId(b as u32);
            if !st.in_be(id) {
                st.registry.transition(id, StateStatus::Open).unwrap();
                st.mark_partially_expanded(id).unwrap();
            }
        }
        for &(k, a, f) in &sc.open {
            let id = StateId(k as u32);
            let e = match a {
                Some(a) => Edge::real(id, a),
                None => Edge::dummy(id),
            };
            if !st.open.contains(&e) {
                st.open.insert_or_reposition(e, f as f64 / 8.0, st.registry.g(id)).unwrap();
            }
        }
        (graph, st)
    }

    fn params_strategy() -> impl Strategy<Value = IndependenceParams> {
        (prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(5.0)], prop_oneof![Just(1.0), Just(3.0)], any::<bool>())
            .prop_map(|(eps, w, full)| IndependenceParams::new(eps, w, full).unwrap())
    }

    proptest! {
        #[test]
        fn select_matches_first_safe_element(sc in scenario(), params in params_strategy()) {
            let (graph, st) = build(&sc);
            let mut memo = SourceMemo::new();
            let expected = st
                .open
                .iter()
                .map(|(_, e)| *e)
                .find(|&e| edge_safe_to_expand(e, &st, &graph, &params, &mut memo));
            let mut scratch = SelectScratch::new();
            prop_assert_eq!(select_safe_edge(&st, &graph, &params, &mut scratch), expected);
        }

        #[test]
        fn removing_constraints_keeps_safety(sc in scenario(), params in params_strategy(), pick in any::<prop::sample::Index>()) {
            let (graph, st) = build(&sc);
            let mut memo = SourceMemo::new();
            let edges: Vec<Edge> = st.open.iter().map(|(_, e)| *e).collect();
            for &cand in &edges {
                if !edge_safe_to_expand(cand, &st, &graph, &params, &mut memo) {
                    continue;
                }
                let others: Vec<Edge> = edges.iter().copied().filter(|&e| e != cand).collect();
                if !others.is_empty() {
                    let (_, mut fewer) = build(&sc);
                    fewer.open.remove(pick.get(&others)).unwrap();
                    prop_assert!(edge_safe_to_expand(cand, &fewer, &graph, &params, &mut memo));
                }
                let be: Vec<StateId> = st.be().iter().copied().collect();
                if !be.is_empty() {
                    let (_, mut fewer) = build(&sc);
                    let gone = *pick.get(&be);
                    fewer.set_num_actions(gone, 0);
                    fewer.mark_closed(gone).unwrap();
                    prop_assert!(edge_safe_to_expand(cand, &fewer, &graph, &params, &mut memo));
                }
            }
        }

        #[test]
        fn lower_priority_sources_are_independent(
            sc in scenario(),
            w in prop_oneof![Just(1.0), Just(1.5), Just(2.0)],
            extra in prop_oneof![Just(0.0), Just(0.5), Just(3.0)],
        ) {
            let eps = w + extra;
            let h = |k: usize| {
                let (x, y) = sc.positions[k];
                (x.abs() + y.abs()) as f64
            };
            // Manhattan on both sides keeps the triangle inequality exact.
            let hp = |a: usize, b: usize| {
                let (ax, ay) = sc.positions[a];
                let (bx, by) = sc.positions[b];
                ((ax - bx).abs() + (ay - by).abs()) as f64
            };
            let f = |k: usize| sc.g[k] as f64 / 8.0 + w * h(k);
            for e in 0..sc.positions.len() {
                for e2 in 0..sc.positions.len() {
                    if f(e) <= f(e2) {
                        prop_assert!(state_independent(
                            sc.g[e] as f64 / 8.0,
                            sc.g[e2] as f64 / 8.0,
                            hp(e2, e),
                            eps
                        ));
                    }
                }
            }
        }

        #[test]
        fn huge_epsilon_makes_everything_safe(sc in scenario()) {
            let mut sc = sc;
            let n = sc.positions.len();
            sc.positions = (0..n as i32).map(|k| (k, 0)).collect();
            let (graph, st) = build(&sc);
            let params = IndependenceParams::new(1e12, 1.0, true).unwrap();
            let mut memo = SourceMemo::new();
            for (_, &e) in st.open.iter() {
                prop_assert!(edge_safe_to_expand(e, &st, &graph, &params, &mut memo));
            }
        }
    }
}
