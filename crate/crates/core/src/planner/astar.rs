use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use super::{evaluate_counted, solved, AuditLog, Counters, Outcome, PlannerConfig, SearchResult, Selection};
use crate::error::SearchError;
use crate::search::{ParentEdge, SearchState, StateId};
use crate::space::{SearchSpace, Transition};

/// Serial A*/wA*. States are expanded whole, without re-expansion.
pub(super) fn run<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
) -> Result<SearchResult<Sp::State>, SearchError> {
    let evals = AtomicU64::new(0);
    let mut result = search(space, start, config, &mut |key, n| {
        Ok((0..n).map(|a| evaluate_counted(space, key, a, &evals)).collect())
    })?;
    result.stats.edges_evaluated = evals.load(Ordering::Relaxed);
    Ok(result)
}

/// The wA* loop with a pluggable batch evaluator: `expand(key, n)` returns
/// the outcome of actions `0..n` of `key`, in order.
pub(super) fn search<Sp, E>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
    expand: &mut E,
) -> Result<SearchResult<Sp::State>, SearchError>
where
    Sp: SearchSpace,
    E: FnMut(&Sp::State, usize) -> Result<Vec<Option<Transition<Sp::State>>>, SearchError>,
{
    let w = config.effective_weight();
    let deadline = Instant::now() + config.time_limit;
    let mut st: SearchState<Sp::State, StateId> = SearchState::new();
    let mut counters = Counters::default();
    let mut audit = config.audit.then(AuditLog::default);

    let s0 = st.registry.get_or_insert(start, space.heuristic(start));
    st.registry.set_start(s0);
    st.push_state(s0, w)?;

    let outcome = loop {
        counters.observe_open(st.open.len());
        if Instant::now() >= deadline {
            break Outcome::Timeout;
        }
        let Some((_, id)) = st.open.pop_min() else {
            break Outcome::NoSolution;
        };
        st.bump();
        let key = st.registry.key(id).clone();
        if let Some(log) = audit.as_mut() {
            log.selections.push(Selection {
                state: key.clone(),
                g: st.registry.g(id),
                dummy: false,
                rank: 0,
                be_len: 0,
            });
        }
        if space.is_goal(&key) {
            let mut res = solved(&st.registry, id)?;
            counters.fill(&mut res.stats);
            res.audit = audit;
            return Ok(res);
        }
        let n = space.num_actions(&key);
        st.mark_partially_expanded(id)?;
        st.set_num_actions(id, n);
        let outcomes = expand(&key, n)?;
        let g = st.registry.g(id);
        for (a, t) in outcomes.into_iter().enumerate() {
            if let Some(log) = audit.as_mut() {
                log.record_evaluation(&key, a);
            }
            if let Some(t) = t {
                let sid = st
                    .registry
                    .get_or_insert_with(&t.successor, || space.heuristic(&t.successor));
                let g_new = g + t.cost;
                if g_new < st.registry.g(sid) {
                    if st.in_be(sid) || st.is_closed(sid) {
                        counters.blocked_improvements += 1;
                    } else {
                        let parent = ParentEdge { source: id, action: a, cost: t.cost };
                        st.registry.improve(sid, g_new, parent)?;
                        st.push_state(sid, w)?;
                    }
                }
            }
            st.successor_done(id)?;
        }
        if n == 0 {
            st.mark_closed(id)?;
        }
        counters.states_expanded += 1;
        if let Some(log) = audit.as_mut() {
            log.record_closing(&key);
        }
    };
    let mut res = SearchResult::unsolved(outcome);
    counters.fill(&mut res.stats);
    res.stats.be_size_at_exit = st.be().len();
    res.audit = audit;
    Ok(res)
}
