use super::pool::{run_parallel, Inner, Meters, Scheme};
use super::{evaluate_counted, AuditLog, PlannerConfig, SearchResult};
use crate::error::SearchError;
use crate::search::{ParentEdge, SearchState, StateId};
use crate::space::{SearchSpace, Transition};

/// wPA*SE: independent states are expanded in parallel, each by one worker
/// that evaluates all of the state's edges in turn.
pub(super) fn run<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
) -> Result<SearchResult<Sp::State>, SearchError> {
    let params = config.independence()?;
    let meters = Meters::default();
    let scheme = StateScheme {
        space,
        meters: &meters,
        weight: config.effective_weight(),
    };
    run_parallel(space, &scheme, &meters, start, config, &params)
}

struct StateScheme<'a, Sp> {
    space: &'a Sp,
    meters: &'a Meters,
    weight: f64,
}

impl<Sp: SearchSpace> Scheme<Sp> for StateScheme<'_, Sp> {
    type Item = StateId;
    type Job = (StateId, Sp::State, usize);
    type Output = Vec<Option<Transition<Sp::State>>>;

    fn source(item: &StateId) -> StateId {
        *item
    }

    fn seed(&self, st: &mut SearchState<Sp::State, StateId>, start: &Sp::State) -> Result<(), SearchError> {
        let id = st.registry.get_or_insert(start, self.space.heuristic(start));
        st.registry.set_start(id);
        st.push_state(id, self.weight)
    }

    fn prepare(
        &self,
        inner: &mut Inner<Sp::State, StateId>,
        id: StateId,
    ) -> Result<Option<Self::Job>, SearchError> {
        let key = inner.st.registry.key(id).clone();
        let n = self.space.num_actions(&key);
        inner.st.mark_partially_expanded(id)?;
        inner.st.set_num_actions(id, n);
        if n == 0 {
            inner.st.mark_closed(id)?;
            inner.counters.states_expanded += 1;
            if let Some(log) = inner.audit.as_mut() {
                log.record_closing(&key);
            }
            return Ok(None);
        }
        Ok(Some((id, key, n)))
    }

    fn audit(&self, log: &mut AuditLog<Sp::State>, (_, key, n): &Self::Job) {
        for a in 0..*n {
            log.record_evaluation(key, a);
        }
    }

    fn work(&self, (_, key, n): &Self::Job) -> Self::Output {
        (0..*n)
            .map(|a| evaluate_counted(self.space, key, a, &self.meters.evaluations))
            .collect()
    }

    fn apply(
        &self,
        inner: &mut Inner<Sp::State, StateId>,
        (id, key, _): Self::Job,
        out: Self::Output,
    ) -> Result<(), SearchError> {
        let st = &mut inner.st;
        let g = st.registry.g(id);
        for (a, t) in out.into_iter().enumerate() {
            if let Some(t) = t {
                let sid = st
                    .registry
                    .get_or_insert_with(&t.successor, || self.space.heuristic(&t.successor));
                let g_new = g + t.cost;
                if g_new < st.registry.g(sid) {
                    if st.in_be(sid) || st.is_closed(sid) {
                        inner.counters.blocked_improvements += 1;
                    } else {
                        let parent = ParentEdge { source: id, action: a, cost: t.cost };
                        st.registry.improve(sid, g_new, parent)?;
                        st.push_state(sid, self.weight)?;
                        inner.counters.observe_open(st.open.len());
                    }
                }
            }
            if st.successor_done(id)? {
                inner.counters.states_expanded += 1;
                if let Some(log) = inner.audit.as_mut() {
                    log.record_closing(&key);
                }
            }
        }
        Ok(())
    }
}
