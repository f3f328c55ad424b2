//! The planners behind one entry point, [`plan`].

mod astar;
mod audit;
mod eastar;
mod epase;
mod pool;
mod pwastar;
mod wpase;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

pub use audit::{AuditLog, Selection};

use crate::error::SearchError;
use crate::independence::IndependenceParams;
use crate::search::{Registry, StateId};
use crate::space::{Cost, SearchSpace, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// A* (weight forced to 1).
    Astar,
    /// Weighted A*.
    WeightedAstar,
    /// Edge-based (weighted) A*.
    EdgeAstar,
    /// Weighted A* with each expansion's edges evaluated in parallel.
    ParallelWeightedAstar,
    /// Parallel weighted A* for slow expansions: independent states in
    /// parallel.
    Wpase,
    /// Edge-based parallel A* for slow evaluations: independent edges in
    /// parallel.
    Epase,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Astar,
        Algorithm::WeightedAstar,
        Algorithm::EdgeAstar,
        Algorithm::ParallelWeightedAstar,
        Algorithm::Wpase,
        Algorithm::Epase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Astar => "astar",
            Algorithm::WeightedAstar => "wastar",
            Algorithm::EdgeAstar => "eastar",
            Algorithm::ParallelWeightedAstar => "pwastar",
            Algorithm::Wpase => "wpase",
            Algorithm::Epase => "epase",
        }
    }

    pub fn is_serial(self) -> bool {
        matches!(
            self,
            Algorithm::Astar | Algorithm::WeightedAstar | Algorithm::EdgeAstar
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let alg = match norm.as_str() {
            "astar" | "a*" => Algorithm::Astar,
            "wastar" | "wa*" => Algorithm::WeightedAstar,
            "eastar" | "ea*" | "weastar" | "wea*" => Algorithm::EdgeAstar,
            "pwastar" | "pwa*" => Algorithm::ParallelWeightedAstar,
            "wpase" | "wpa*se" | "pase" | "pa*se" => Algorithm::Wpase,
            "epase" | "epa*se" | "wepase" | "wepa*se" => Algorithm::Epase,
            _ => return Err(format!("unknown algorithm `{s}`")),
        };
        Ok(alg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThreadManagement {
    /// Workers are created only when every existing one is busy, up to the
    /// thread budget. Idle workers block.
    SpawnOnDemand,
    /// The whole budget is started up front and idle workers poll for work.
    PreallocatedPool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub algorithm: Algorithm,
    pub weight: f64,
    pub epsilon: f64,
    /// Worker budget. Ignored by the serial algorithms.
    pub num_threads: usize,
    pub thread_mgt: ThreadManagement,
    pub time_limit: Duration,
    /// Check independence against every OPEN element, not only those ahead
    /// of the candidate. Always on when `weight > epsilon`.
    pub full_open_scan: bool,
    /// Record evaluations, closings and selections in
    /// [`SearchResult::audit`].
    pub audit: bool,
    /// Poll instead of blocking while waiting for work or for OPEN/BE to
    /// change.
    pub busy_wait: bool,
}

impl PlannerConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        PlannerConfig {
            algorithm,
            weight: 1.0,
            epsilon: 1.0,
            num_threads: 1,
            thread_mgt: ThreadManagement::SpawnOnDemand,
            time_limit: Duration::from_secs(60),
            full_open_scan: false,
            audit: false,
            busy_wait: false,
        }
    }

    pub fn weight(mut self, w: f64) -> Self {
        self.weight = w;
        self
    }

    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn threads(mut self, n: usize) -> Self {
        self.num_threads = n;
        self
    }

    pub fn thread_mgt(mut self, mode: ThreadManagement) -> Self {
        self.thread_mgt = mode;
        self
    }

    pub fn time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn full_open_scan(mut self, on: bool) -> Self {
        self.full_open_scan = on;
        self
    }

    pub fn audit(mut self, on: bool) -> Self {
        self.audit = on;
        self
    }

    pub fn busy_wait(mut self, on: bool) -> Self {
        self.busy_wait = on;
        self
    }

    /// Weight actually used in priorities.
    pub fn effective_weight(&self) -> f64 {
        if self.algorithm == Algorithm::Astar {
            1.0
        } else {
            self.weight
        }
    }

    pub fn independence(&self) -> Result<IndependenceParams, SearchError> {
        IndependenceParams::new(self.epsilon, self.effective_weight(), self.full_open_scan)
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.num_threads == 0 {
            return Err(SearchError::InvalidConfig("num_threads must be positive".into()));
        }
        self.independence().map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Solved,
    NoSolution,
    Timeout,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Solved => "solved",
            Outcome::NoSolution => "no_solution",
            Outcome::Timeout => "timeout",
        })
    }
}

impl FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "solved" => Ok(Outcome::Solved),
            "no_solution" => Ok(Outcome::NoSolution),
            "timeout" => Ok(Outcome::Timeout),
            other => Err(format!("unknown outcome `{other}`")),
        }
    }
}

/// One evaluated edge of a solution path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEdge<S> {
    pub source: S,
    pub action: usize,
    pub successor: S,
    pub cost: Cost,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    /// States moved to CLOSED.
    pub states_expanded: u64,
    /// Evaluator calls; dummy edges are never evaluated.
    pub edges_evaluated: u64,
    pub dummy_expansions: u64,
    pub max_open_size: usize,
    pub threads_spawned: usize,
    pub wall_time: Duration,
    /// Time workers spent acquiring the search lock.
    pub lock_wait_time: Duration,
    /// g-improvements refused because the successor was already in BE or
    /// CLOSED.
    pub blocked_improvements: u64,
    /// |BE| when the run ended.
    pub be_size_at_exit: usize,
}

impl RunStats {
    /// Counters only; equal across repeated deterministic runs.
    pub fn counters(&self) -> [u64; 7] {
        [
            self.states_expanded,
            self.edges_evaluated,
            self.dummy_expansions,
            self.max_open_size as u64,
            self.threads_spawned as u64,
            self.blocked_improvements,
            self.be_size_at_exit as u64,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult<S> {
    pub outcome: Outcome,
    /// Empty unless solved.
    pub path: Vec<PathEdge<S>>,
    /// Infinite unless solved.
    pub cost: Cost,
    pub stats: RunStats,
    pub audit: Option<AuditLog<S>>,
}

impl<S> SearchResult<S> {
    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }

    fn unsolved(outcome: Outcome) -> Self {
        SearchResult {
            outcome,
            path: Vec::new(),
            cost: f64::INFINITY,
            stats: RunStats::default(),
            audit: None,
        }
    }
}

/// Runs the configured planner from `start`.
pub fn plan<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
) -> Result<SearchResult<Sp::State>, SearchError> {
    config.validate()?;
    let t0 = Instant::now();
    let mut result = match config.algorithm {
        Algorithm::Astar | Algorithm::WeightedAstar => astar::run(space, start, config)?,
        Algorithm::ParallelWeightedAstar => pwastar::run(space, start, config)?,
        Algorithm::EdgeAstar => eastar::run(space, start, config)?,
        Algorithm::Wpase => wpase::run(space, start, config)?,
        Algorithm::Epase => epase::run(space, start, config)?,
    };
    result.stats.wall_time = t0.elapsed();
    Ok(result)
}

/// Follows back pointers from `goal` to the start and returns the path in
/// forward order.
pub fn backtrack<S: Clone + Eq + std::hash::Hash>(
    registry: &Registry<S>,
    goal: StateId,
) -> Result<Vec<PathEdge<S>>, SearchError> {
    let mut path = Vec::new();
    let mut cur = goal;
    while let Some(p) = registry.record(cur).parent {
        if path.len() > registry.len() {
            return Err(SearchError::BrokenParentChain(cur));
        }
        path.push(PathEdge {
            source: registry.key(p.source).clone(),
            action: p.action,
            successor: registry.key(cur).clone(),
            cost: p.cost,
        });
        cur = p.source;
    }
    if registry.g(cur) != 0.0 {
        return Err(SearchError::BrokenParentChain(cur));
    }
    path.reverse();
    Ok(path)
}

/// The one place planners call the domain evaluator.
pub(crate) fn evaluate_counted<Sp: SearchSpace>(
    space: &Sp,
    state: &Sp::State,
    action: usize,
    counter: &AtomicU64,
) -> Option<Transition<Sp::State>> {
    counter.fetch_add(1, Ordering::Relaxed);
    space.evaluate(state, action)
}

pub(crate) fn solved<S: Clone + Eq + std::hash::Hash>(
    registry: &Registry<S>,
    goal: StateId,
) -> Result<SearchResult<S>, SearchError> {
    let path = backtrack(registry, goal)?;
    Ok(SearchResult {
        outcome: Outcome::Solved,
        path,
        cost: registry.g(goal),
        stats: RunStats::default(),
        audit: None,
    })
}

/// Counters updated under the search lock.
#[derive(Debug, Default, Clone)]
pub(crate) struct Counters {
    pub states_expanded: u64,
    pub dummy_expansions: u64,
    pub blocked_improvements: u64,
    pub max_open_size: usize,
}

impl Counters {
    pub fn observe_open(&mut self, len: usize) {
        self.max_open_size = self.max_open_size.max(len);
    }

    pub fn fill(&self, stats: &mut RunStats) {
        stats.states_expanded = self.states_expanded;
        stats.dummy_expansions = self.dummy_expansions;
        stats.blocked_improvements = self.blocked_improvements;
        stats.max_open_size = self.max_open_size;
    }
}
