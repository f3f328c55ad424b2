//! Ground truth by plain uniform-cost search.
//!
//! Shares nothing with the planners: its own state table, its own frontier
//! (a vector scanned linearly for the minimum) and its own expansion loop.
//! Slow on purpose.

use std::collections::HashMap;

use crate::error::SearchError;
use crate::space::{Cost, SearchSpace};

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct OracleResult<S> {
    /// `None` when no goal state is reachable.
    pub optimal_cost: Option<Cost>,
    pub goal: Option<S>,
    /// Settled distances. Complete over the reachable set when the oracle
    /// ran exhaustively.
    pub optimal_g: HashMap<S, Cost>,
}

impl<S: std::hash::Hash + Eq> OracleResult<S> {
    pub fn reachable(&self) -> bool {
        self.optimal_cost.is_some()
    }

    pub fn g_star(&self, s: &S) -> Option<Cost> {
        self.optimal_g.get(s).copied()
    }
}

/// Exact shortest distances from `start`, with delays switched off.
///
/// With `exhaustive` unset the search stops once the first goal state is
/// settled; otherwise it settles every reachable state.
pub fn oracle_shortest_paths<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    exhaustive: bool,
) -> Result<OracleResult<Sp::State>, SearchError> {
    oracle_with_limit(space, start, exhaustive, DEFAULT_STATE_LIMIT)
}

pub fn oracle_with_limit<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    exhaustive: bool,
    limit: usize,
) -> Result<OracleResult<Sp::State>, SearchError> {
    let mut ids: HashMap<Sp::State, usize> = HashMap::new();
    let mut states: Vec<Sp::State> = Vec::new();
    let mut dist: Vec<Cost> = Vec::new();
    let mut settled: Vec<bool> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();

    ids.insert(start.clone(), 0);
    states.push(start.clone());
    dist.push(0.0);
    settled.push(false);
    frontier.push(0);

    let mut best_goal: Option<(Cost, usize)> = None;
    while !frontier.is_empty() {
        let mut pick = 0;
        for i in 1..frontier.len() {
            if dist[frontier[i]] < dist[frontier[pick]] {
                pick = i;
            }
        }
        let u = frontier.swap_remove(pick);
        settled[u] = true;
        let du = dist[u];
        if best_goal.is_none() && space.is_goal(&states[u]) {
            best_goal = Some((du, u));
            if !exhaustive {
                break;
            }
        }
        let su = states[u].clone();
        for a in 0..space.num_actions(&su) {
            let Some(t) = space.evaluate_without_delay(&su, a) else {
                continue;
            };
            if !t.cost.is_finite() {
                continue;
            }
            let v = match ids.get(&t.successor) {
                Some(&v) => v,
                None => {
                    if states.len() >= limit {
                        return Err(SearchError::OracleBudgetExceeded { limit });
                    }
                    let v = states.len();
                    ids.insert(t.successor.clone(), v);
                    states.push(t.successor);
                    dist.push(f64::INFINITY);
                    settled.push(false);
                    v
                }
            };
            if settled[v] {
                continue;
            }
            let nd = du + t.cost;
            if nd < dist[v] {
                if dist[v] == f64::INFINITY {
                    frontier.push(v);
                }
                dist[v] = nd;
            }
        }
    }

    let optimal_g = states
        .iter()
        .zip(&dist)
        .zip(&settled)
        .filter(|(_, &done)| done)
        .map(|((s, &d), _)| (s.clone(), d))
        .collect();
    Ok(OracleResult {
        optimal_cost: best_goal.map(|(c, _)| c),
        goal: best_goal.map(|(_, i)| states[i].clone()),
        optimal_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{random_explicit_graph, ExplicitGraph, GoalRegion, GridDomain, GridState, OccupancyGrid, Primitive};

    #[test]
    fn empty_grid_manhattan() {
        let d = GridDomain::new(OccupancyGrid::new(5, 5), Primitive::four_connected(), 1, GoalRegion::cell(4, 4)).unwrap();
        let r = oracle_shortest_paths(&d, &GridState::new(0, 0, 0), false).unwrap();
        assert_eq!(r.optimal_cost, Some(8.0));
        assert_eq!(r.goal, Some(GridState::new(4, 4, 0)));
    }

    #[test]
    fn unreachable_is_marked() {
        let mut g = ExplicitGraph::new(3);
        g.add_edge(0, 1, 1.0).set_goal(2);
        let r = oracle_shortest_paths(&g, &0, true).unwrap();
        assert_eq!(r.optimal_cost, None);
        assert!(!r.reachable());
        assert_eq!(r.g_star(&1), Some(1.0));
        assert_eq!(r.g_star(&2), None);
    }

    #[test]
    fn budget_guard() {
        let d = GridDomain::new(OccupancyGrid::new(30, 30), Primitive::four_connected(), 1, GoalRegion::cell(29, 29)).unwrap();
        let err = oracle_with_limit(&d, &GridState::new(0, 0, 0), true, 100).unwrap_err();
        assert_eq!(err, SearchError::OracleBudgetExceeded { limit: 100 });
    }

    #[test]
    fn bellman_consistency_on_random_graphs() {
        for seed in 0..10 {
            let inst = random_explicit_graph(seed, 20, 3.0, (1.0, 2.0), false).unwrap();
            let g = &inst.space;
            let r = oracle_shortest_paths(g, &inst.start, true).unwrap();
            for s in 0..g.num_states() {
                let Some(ds) = r.g_star(&s) else { continue };
                // Relaxed edges never improve a settled distance.
                for &(t, c) in g.edges(s) {
                    let dt = r.g_star(&t).expect("successor of reachable state is reachable");
                    assert!(dt <= ds + c);
                }
                // Every non-start distance is achieved by some predecessor.
                if s != inst.start {
                    let achieved = (0..g.num_states()).any(|p| {
                        r.g_star(&p).is_some_and(|dp| g.edges(p).iter().any(|&(t, c)| t == s && dp + c == ds))
                    });
                    assert!(achieved, "seed {seed} state {s}");
                }
            }
        }
    }
}
