use super::eastar::{apply_edge, expand_dummy};
use super::pool::{run_parallel, Inner, Meters, Scheme};
use super::{evaluate_counted, AuditLog, PlannerConfig, SearchResult};
use crate::error::SearchError;
use crate::search::{Edge, SearchState, StateId};
use crate::space::{SearchSpace, Transition};

/// ePA*SE / w-ePA*SE.
pub(super) fn run<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
) -> Result<SearchResult<Sp::State>, SearchError> {
    let params = config.independence()?;
    let meters = Meters::default();
    let scheme = EdgeScheme {
        space,
        meters: &meters,
        weight: config.effective_weight(),
    };
    run_parallel(space, &scheme, &meters, start, config, &params)
}

struct EdgeScheme<'a, Sp> {
    space: &'a Sp,
    meters: &'a Meters,
    weight: f64,
}

impl<Sp: SearchSpace> Scheme<Sp> for EdgeScheme<'_, Sp> {
    type Item = Edge;
    type Job = (Edge, Sp::State);
    type Output = Option<Transition<Sp::State>>;

    fn source(item: &Edge) -> StateId {
        item.source
    }

    fn is_dummy(item: &Edge) -> bool {
        item.is_dummy()
    }

    fn seed(&self, st: &mut SearchState<Sp::State, Edge>, start: &Sp::State) -> Result<(), SearchError> {
        st.insert_start(start, self.space.heuristic(start), self.weight)
            .map(|_| ())
    }

    fn prepare(
        &self,
        inner: &mut Inner<Sp::State, Edge>,
        edge: Edge,
    ) -> Result<Option<Self::Job>, SearchError> {
        if edge.is_dummy() {
            expand_dummy(
                &mut inner.st,
                &mut inner.counters,
                inner.audit.as_mut(),
                self.space,
                edge,
                self.weight,
            )?;
            return Ok(None);
        }
        Ok(Some((edge, inner.st.registry.key(edge.source).clone())))
    }

    fn audit(&self, log: &mut AuditLog<Sp::State>, (edge, key): &Self::Job) {
        log.record_evaluation(key, edge.action.index());
    }

    fn work(&self, (edge, key): &Self::Job) -> Self::Output {
        evaluate_counted(self.space, key, edge.action.index(), &self.meters.evaluations)
    }

    fn apply(
        &self,
        inner: &mut Inner<Sp::State, Edge>,
        (edge, _): Self::Job,
        out: Self::Output,
    ) -> Result<(), SearchError> {
        apply_edge(
            &mut inner.st,
            &mut inner.counters,
            inner.audit.as_mut(),
            self.space,
            edge,
            out,
            self.weight,
        )
    }
}
