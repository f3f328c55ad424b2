use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use super::{evaluate_counted, solved, AuditLog, Counters, Outcome, PlannerConfig, SearchResult, Selection};
use crate::error::SearchError;
use crate::search::{Edge, ParentEdge, SearchState};
use crate::space::{SearchSpace, Transition};

/// Serial eA*/w-eA*: pops the min-f edge, no independence checks.
pub(super) fn run<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
) -> Result<SearchResult<Sp::State>, SearchError> {
    let w = config.effective_weight();
    let deadline = Instant::now() + config.time_limit;
    let evals = AtomicU64::new(0);
    let mut st: SearchState<Sp::State, Edge> = SearchState::new();
    let mut counters = Counters::default();
    let mut audit = config.audit.then(AuditLog::default);
    st.insert_start(start, space.heuristic(start), w)?;

    let outcome = loop {
        counters.observe_open(st.open.len());
        if Instant::now() >= deadline {
            break Outcome::Timeout;
        }
        let Some((_, edge)) = st.open.pop_min() else {
            break Outcome::NoSolution;
        };
        st.bump();
        if let Some(log) = audit.as_mut() {
            log.selections.push(Selection {
                state: st.registry.key(edge.source).clone(),
                g: st.registry.g(edge.source),
                dummy: edge.is_dummy(),
                rank: 0,
                be_len: st.be().len(),
            });
        }
        let key = st.registry.key(edge.source).clone();
        if space.is_goal(&key) {
            let mut res = solved(&st.registry, edge.source)?;
            counters.fill(&mut res.stats);
            res.stats.edges_evaluated = evals.load(Ordering::Relaxed);
            res.stats.be_size_at_exit = st.be().len();
            res.audit = audit;
            return Ok(res);
        }
        if edge.is_dummy() {
            expand_dummy(&mut st, &mut counters, audit.as_mut(), space, edge, w)?;
        } else {
            let t = evaluate_counted(space, &key, edge.action.index(), &evals);
            if let Some(log) = audit.as_mut() {
                log.record_evaluation(&key, edge.action.index());
            }
            apply_edge(&mut st, &mut counters, audit.as_mut(), space, edge, t, w)?;
        }
    };
    let mut res = SearchResult::unsolved(outcome);
    counters.fill(&mut res.stats);
    res.stats.edges_evaluated = evals.load(Ordering::Relaxed);
    res.stats.be_size_at_exit = st.be().len();
    res.audit = audit;
    Ok(res)
}

/// Dummy-edge expansion: source into BE, its real edges into OPEN.
pub(super) fn expand_dummy<Sp: SearchSpace>(
    st: &mut SearchState<Sp::State, Edge>,
    counters: &mut Counters,
    audit: Option<&mut AuditLog<Sp::State>>,
    space: &Sp,
    edge: Edge,
    w: f64,
) -> Result<(), SearchError> {
    let n = space.num_actions(st.registry.key(edge.source));
    st.expand_dummy(edge.source, n, w)?;
    counters.dummy_expansions += 1;
    counters.observe_open(st.open.len());
    if n == 0 {
        counters.states_expanded += 1;
        if let Some(log) = audit {
            log.record_closing(st.registry.key(edge.source));
        }
    }
    Ok(())
}

/// Applies the outcome of evaluating real edge `edge`.
pub(super) fn apply_edge<Sp: SearchSpace>(
    st: &mut SearchState<Sp::State, Edge>,
    counters: &mut Counters,
    audit: Option<&mut AuditLog<Sp::State>>,
    space: &Sp,
    edge: Edge,
    outcome: Option<Transition<Sp::State>>,
    w: f64,
) -> Result<(), SearchError> {
    let src = edge.source;
    let action = edge.action.index();
    if let Some(t) = outcome {
        let sid = st
            .registry
            .get_or_insert_with(&t.successor, || space.heuristic(&t.successor));
        let g_new = st.registry.g(src) + t.cost;
        if g_new < st.registry.g(sid) {
            if st.in_be(sid) || st.is_closed(sid) {
                counters.blocked_improvements += 1;
            } else {
                let parent = ParentEdge { source: src, action, cost: t.cost };
                st.registry.improve(sid, g_new, parent)?;
                st.push_dummy(sid, w)?;
                counters.observe_open(st.open.len());
            }
        }
    }
    if st.successor_done(src)? {
        counters.states_expanded += 1;
        if let Some(log) = audit {
            log.record_closing(st.registry.key(src));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ExplicitGraph;
    use crate::search::{StateId, StateStatus};

    /// s0 and s1 both lead to s2; s0 is registered as start.
    fn setup() -> (ExplicitGraph, SearchState<usize, Edge>, StateId) {
        let mut g = ExplicitGraph::new(3);
        g.add_edge(0, 2, 7.0).add_edge(1, 2, 1.0).set_goal(2);
        g.set_heuristic(vec![0.0, 0.0, 4.0]);
        let mut st = SearchState::new();
        let s0 = st.insert_start(&0, 0.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s0)).unwrap();
        st.expand_dummy(s0, 1, 1.0).unwrap();
        st.open_remove(&Edge::real(s0, 0)).unwrap();
        (g, st, s0)
    }

    #[test]
    fn better_path_repositions_dummy() {
        let (g, mut st, s0) = setup();
        let mut c = Counters::default();
        let s2 = st.registry.get_or_insert(&2, 4.0);
        st.registry.improve(s2, 10.0, ParentEdge { source: s0, action: 0, cost: 10.0 }).unwrap();
        st.push_dummy(s2, 1.0).unwrap();
        assert_eq!(st.open.key_of(&Edge::dummy(s2)).unwrap().f, 14.0);
        let t = Transition { successor: 2, cost: 7.0 };
        apply_edge(&mut st, &mut c, None, &g, Edge::real(s0, 0), Some(t), 1.0).unwrap();
        assert_eq!(st.registry.g(s2), 7.0);
        assert_eq!(st.open.key_of(&Edge::dummy(s2)).unwrap().f, 11.0);
        assert_eq!(st.open.len(), 1);
        assert!(st.is_closed(s0));
        assert_eq!(c.states_expanded, 1);
    }

    #[test]
    fn closed_successor_is_left_alone() {
        let (g, mut st, s0) = setup();
        let mut c = Counters::default();
        let s2 = st.registry.get_or_insert(&2, 4.0);
        st.registry.improve(s2, 10.0, ParentEdge { source: s0, action: 0, cost: 10.0 }).unwrap();
        st.push_dummy(s2, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s2)).unwrap();
        st.expand_dummy(s2, 0, 1.0).unwrap();
        assert!(st.is_closed(s2));
        let t = Transition { successor: 2, cost: 7.0 };
        apply_edge(&mut st, &mut c, None, &g, Edge::real(s0, 0), Some(t), 1.0).unwrap();
        assert_eq!(st.registry.g(s2), 10.0);
        assert!(st.open.is_empty());
        assert_eq!(c.blocked_improvements, 1);
        assert_eq!(st.registry.status(s0), StateStatus::Closed);
    }

    #[test]
    fn invalid_edge_still_counts() {
        let (g, mut st, s0) = setup();
        let mut c = Counters::default();
        apply_edge(&mut st, &mut c, None, &g, Edge::real(s0, 0), None, 1.0).unwrap();
        assert!(st.is_closed(s0));
        assert_eq!(st.registry.len(), 1);
    }

    #[test]
    fn dummy_puts_all_real_edges_at_one_priority() {
        let mut g = ExplicitGraph::new(4);
        g.add_edge(0, 1, 1.0).add_edge(0, 2, 1.0).add_edge(0, 3, 1.0);
        g.set_heuristic(vec![3.0, 0.0, 0.0, 0.0]);
        let mut st = SearchState::new();
        let s0 = st.insert_start(&0, 3.0, 1.0).unwrap();
        st.open_remove(&Edge::dummy(s0)).unwrap();
        let mut c = Counters::default();
        expand_dummy(&mut st, &mut c, None, &g, Edge::dummy(s0), 1.0).unwrap();
        assert!(st.in_be(s0));
        let fs: Vec<f64> = st.open.iter().map(|(k, _)| k.f).collect();
        assert_eq!(fs, vec![3.0; 3]);
        assert_eq!(c.dummy_expansions, 1);
    }
}
