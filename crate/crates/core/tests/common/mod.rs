#![allow(dead_code)]

use std::time::Duration;

use edge_search::domain::{ExplicitGraph, GoalRegion, GridDomain, GridState, OccupancyGrid, Primitive};
use edge_search::{Cost, SearchSpace, Transition};

/// Sleeps before every evaluation so that workers actually overlap.
pub struct Sleepy<S> {
    pub inner: S,
    pub delay: Duration,
}

impl<S: SearchSpace> SearchSpace for Sleepy<S> {
    type State = S::State;

    fn num_actions(&self, s: &S::State) -> usize {
        self.inner.num_actions(s)
    }

    fn evaluate(&self, s: &S::State, a: usize) -> Option<Transition<S::State>> {
        std::thread::sleep(self.delay);
        self.inner.evaluate(s, a)
    }

    fn evaluate_without_delay(&self, s: &S::State, a: usize) -> Option<Transition<S::State>> {
        self.inner.evaluate_without_delay(s, a)
    }

    fn heuristic(&self, s: &S::State) -> Cost {
        self.inner.heuristic(s)
    }

    fn pairwise_heuristic(&self, a: &S::State, b: &S::State) -> Cost {
        self.inner.pairwise_heuristic(a, b)
    }

    fn is_goal(&self, s: &S::State) -> bool {
        self.inner.is_goal(s)
    }
}

/// Panics when asked to evaluate action `action` of `state`.
pub struct Booby<S: SearchSpace> {
    pub inner: S,
    pub state: S::State,
    pub action: usize,
}

impl<S: SearchSpace> SearchSpace for Booby<S> {
    type State = S::State;

    fn num_actions(&self, s: &S::State) -> usize {
        self.inner.num_actions(s)
    }

    fn evaluate(&self, s: &S::State, a: usize) -> Option<Transition<S::State>> {
        if *s == self.state && a == self.action {
            panic!("collision checker blew up");
        }
        self.inner.evaluate(s, a)
    }

    fn heuristic(&self, s: &S::State) -> Cost {
        self.inner.heuristic(s)
    }

    fn pairwise_heuristic(&self, a: &S::State, b: &S::State) -> Cost {
        self.inner.pairwise_heuristic(a, b)
    }

    fn is_goal(&self, s: &S::State) -> bool {
        self.inner.is_goal(s)
    }
}

/// s0 -> s1, s2, s3; s1 -> s4, s5; s4 -> s6 (goal). Unit costs, zero
/// pairwise heuristic.
pub fn walkthrough_graph() -> ExplicitGraph {
    let mut g = ExplicitGraph::new(7);
    g.add_edge(0, 1, 1.0)
        .add_edge(0, 2, 1.0)
        .add_edge(0, 3, 1.0)
        .add_edge(1, 4, 1.0)
        .add_edge(1, 5, 1.0)
        .add_edge(4, 6, 1.0)
        .set_goal(6)
        .set_heuristic(vec![3.0, 2.0, 3.0, 3.0, 1.0, 3.0, 0.0]);
    g
}

/// A chain s0 -> s1 -> ... -> s_len where every chain state also has an
/// edge to its own dead end. Zero heuristics.
pub fn ladder(len: usize) -> ExplicitGraph {
    let mut g = ExplicitGraph::new(2 * len + 1);
    for i in 0..len {
        g.add_edge(i, i + 1, 1.0);
        g.add_edge(i, len + 1 + i, 1.0);
    }
    g.set_goal(len);
    g.set_heuristic(vec![0.0; 2 * len + 1]);
    g
}

pub fn open_four_connected(w: usize, h: usize, goal: (i32, i32)) -> GridDomain {
    GridDomain::new(
        OccupancyGrid::new(w, h),
        Primitive::four_connected(),
        1,
        GoalRegion::cell(goal.0, goal.1),
    )
    .unwrap()
}

pub fn origin() -> GridState {
    GridState::new(0, 0, 0)
}
