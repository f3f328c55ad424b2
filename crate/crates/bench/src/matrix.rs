//! Trial matrices: every (algorithm, N_t, w, ε) cell runs the same
//! instance sequence.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::time::Duration;

use edge_search::domain::{sample_task, DelayModel, GridDomain, Instance};
use edge_search::{plan, Algorithm, Outcome, PlannerConfig, SearchSpace};
use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use crate::config::BenchConfig;
use crate::BenchError;

/// One planner run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub trial_id: usize,
    #[serde(with = "display")]
    pub algorithm: Algorithm,
    pub threads: usize,
    pub w: f64,
    pub eps: f64,
    #[serde(with = "display")]
    pub outcome: Outcome,
    pub cost: f64,
    /// Seconds.
    pub wall_time: f64,
    pub edges_evaluated: u64,
    pub states_expanded: u64,
    pub threads_spawned: usize,
}

mod display {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// One cell of the matrix.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub threads: usize,
    pub w: f64,
    pub eps: f64,
}

impl Cell {
    pub fn of(r: &BenchRecord) -> Self {
        Cell {
            algorithm: r.algorithm,
            threads: r.threads,
            w: r.w,
            eps: r.eps,
        }
    }

    fn key(&self) -> (Algorithm, usize, u64, u64) {
        (self.algorithm, self.threads, self.w.to_bits(), self.eps.to_bits())
    }

    pub fn planner_config(&self, cfg: &BenchConfig) -> PlannerConfig {
        PlannerConfig::new(self.algorithm)
            .threads(self.threads)
            .weight(self.w)
            .epsilon(self.eps)
            .thread_mgt(cfg.thread_mgt)
            .time_limit(cfg.time_limit)
            .full_open_scan(cfg.full_open_scan)
    }
}

/// Cells in run order. Serial algorithms get a single `N_t = 1` cell.
pub fn cells(cfg: &BenchConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &(w, eps) in &cfg.pairs {
        for &algorithm in &cfg.algorithms {
            let threads: &[usize] = if algorithm.is_serial() { &[1] } else { &cfg.thread_counts };
            for &t in threads {
                out.push(Cell { algorithm, threads: t, w, eps });
            }
        }
    }
    out
}

/// Builds trial instances from the config. Trial `i` uses `seed + i`.
pub struct InstanceSource {
    base: GridDomain,
    seed: u64,
    min_distance: f64,
}

impl InstanceSource {
    pub fn new(cfg: &BenchConfig) -> Result<Self, BenchError> {
        let mut domain = cfg.domain.clone();
        if let DelayModel::LogNormal { seed, .. } = &mut domain.delay {
            *seed = cfg.seed;
        }
        Ok(InstanceSource {
            base: domain.base_domain(cfg.seed)?,
            seed: cfg.seed,
            min_distance: cfg.domain.min_distance,
        })
    }

    pub fn instance(&self, trial: usize) -> Result<Instance<GridDomain>, BenchError> {
        Ok(sample_task(&self.base, self.seed.wrapping_add(trial as u64), self.min_distance, 10_000)?)
    }
}

/// Fingerprint of a grid instance: map, start and goal.
pub fn instance_hash(inst: &Instance<GridDomain>) -> u64 {
    let mut h = DefaultHasher::new();
    inst.space.map().to_string().hash(&mut h);
    inst.start.hash(&mut h);
    format!("{:?}", inst.space.goal()).hash(&mut h);
    format!("{:?}", inst.space.primitives()).hash(&mut h);
    h.finish()
}

pub fn record<S>(trial_id: usize, cell: &Cell, res: &edge_search::SearchResult<S>) -> BenchRecord {
    BenchRecord {
        trial_id,
        algorithm: cell.algorithm,
        threads: cell.threads,
        w: cell.w,
        eps: cell.eps,
        outcome: res.outcome,
        cost: res.cost,
        wall_time: res.stats.wall_time.as_secs_f64(),
        edges_evaluated: res.stats.edges_evaluated,
        states_expanded: res.stats.states_expanded,
        threads_spawned: res.stats.threads_spawned,
    }
}

fn failed_record(trial_id: usize, cell: &Cell, wall_time: Duration) -> BenchRecord {
    BenchRecord {
        trial_id,
        algorithm: cell.algorithm,
        threads: cell.threads,
        w: cell.w,
        eps: cell.eps,
        outcome: Outcome::NoSolution,
        cost: f64::INFINITY,
        wall_time: wall_time.as_secs_f64(),
        edges_evaluated: 0,
        states_expanded: 0,
        threads_spawned: 0,
    }
}

/// Planner failures tolerated per cell before the rest of the cell is
/// skipped.
const MAX_CELL_FAILURES: usize = 3;

/// Runs every cell over the trial instances, one discarded warm-up run per
/// cell. Failed trials are recorded, never dropped.
pub fn run_matrix(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    cfg.validate()?;
    let source = InstanceSource::new(cfg)?;
    run_cells(cfg, &cells(cfg), |trial| {
        let inst = source.instance(trial)?;
        let hash = instance_hash(&inst);
        Ok((inst, hash))
    })
}

/// [`run_matrix`] over an arbitrary instance generator, which returns each
/// trial's instance together with its fingerprint.
pub fn run_cells<Sp, F>(cfg: &BenchConfig, cells: &[Cell], instance: F) -> Result<Vec<BenchRecord>, BenchError>
where
    Sp: SearchSpace,
    F: Fn(usize) -> Result<(Instance<Sp>, u64), BenchError>,
{
    let mut parity: BTreeMap<usize, u64> = BTreeMap::new();
    let mut records = Vec::new();
    for cell in cells {
        let pc = cell.planner_config(cfg);
        info!("cell {} N_t={} w={} eps={}", cell.algorithm, cell.threads, cell.w, cell.eps);
        let (warm, _) = instance(0)?;
        let _ = plan(&warm.space, &warm.start, &pc);
        let mut failures = 0;
        for trial in 0..cfg.trials {
            let (inst, fp) = instance(trial)?;
            let seen = *parity.entry(trial).or_insert(fp);
            if seen != fp {
                return Err(BenchError::Parity { trial });
            }
            if failures >= MAX_CELL_FAILURES {
                records.push(failed_record(trial, cell, Duration::ZERO));
                continue;
            }
            match plan(&inst.space, &inst.start, &pc) {
                Ok(res) => {
                    debug!("trial {trial}: {} cost {} in {:?}", res.outcome, res.cost, res.stats.wall_time);
                    records.push(record(trial, cell, &res));
                }
                Err(e) => {
                    warn!("trial {trial} of {} failed: {e}", cell.algorithm);
                    failures += 1;
                    records.push(failed_record(trial, cell, Duration::ZERO));
                    if failures == MAX_CELL_FAILURES {
                        warn!("giving up on cell after {failures} failures");
                    }
                }
            }
        }
    }
    Ok(records)
}

/// Aggregates of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    #[serde(with = "display")]
    pub algorithm: Algorithm,
    pub threads: usize,
    pub w: f64,
    pub eps: f64,
    pub trials: usize,
    pub solved: usize,
    pub solve_rate: f64,
    pub mean_time: f64,
    pub median_time: f64,
    pub std_time: f64,
    pub mean_edges: f64,
    pub median_edges: f64,
    pub mean_expanded: f64,
    pub mean_cost: f64,
    /// Baseline mean time over this cell's mean time.
    pub speedup: f64,
    pub speedup_median: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Sample standard deviation; 0 for fewer than two values.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Per-cell aggregates, in first-appearance order. Time, edge and cost
/// statistics use solved trials only.
pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut order: Vec<Cell> = Vec::new();
    let mut groups: BTreeMap<(Algorithm, usize, u64, u64), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let c = Cell::of(r);
        let slot = groups.entry(c.key()).or_default();
        if slot.is_empty() {
            order.push(c);
        }
        slot.push(r);
    }
    let mut out: Vec<CellSummary> = order
        .iter()
        .map(|c| {
            let rs = &groups[&c.key()];
            let solved: Vec<&&BenchRecord> = rs.iter().filter(|r| r.outcome == Outcome::Solved).collect();
            let times: Vec<f64> = solved.iter().map(|r| r.wall_time).collect();
            let edges: Vec<f64> = solved.iter().map(|r| r.edges_evaluated as f64).collect();
            let expanded: Vec<f64> = solved.iter().map(|r| r.states_expanded as f64).collect();
            let costs: Vec<f64> = solved.iter().map(|r| r.cost).collect();
            CellSummary {
                algorithm: c.algorithm,
                threads: c.threads,
                w: c.w,
                eps: c.eps,
                trials: rs.len(),
                solved: solved.len(),
                solve_rate: solved.len() as f64 / rs.len() as f64,
                mean_time: mean(&times),
                median_time: median(&times),
                std_time: std_dev(&times),
                mean_edges: mean(&edges),
                median_edges: median(&edges),
                mean_expanded: mean(&expanded),
                mean_cost: mean(&costs),
                speedup: f64::NAN,
                speedup_median: f64::NAN,
            }
        })
        .collect();
    let snapshot = out.clone();
    for s in &mut out {
        if let Some(base) = baseline(&snapshot, s.w, s.eps) {
            s.speedup = base.mean_time / s.mean_time;
            s.speedup_median = base.median_time / s.median_time;
        }
    }
    out
}

/// The wA* single-thread cell with the same (w, ε), else the A* one, else
/// the first cell.
pub fn baseline(cells: &[CellSummary], w: f64, eps: f64) -> Option<&CellSummary> {
    let find = |alg: Algorithm| {
        cells
            .iter()
            .find(|c| c.algorithm == alg && c.threads == 1 && c.w == w && c.eps == eps)
    };
    find(Algorithm::WeightedAstar)
        .or_else(|| find(Algorithm::Astar))
        .or_else(|| cells.first())
}
