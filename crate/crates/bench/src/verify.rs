//! A quick property suite on small instances, for `bench verify`.

use edge_search::domain::{random_explicit_graph, random_grid, walled_goal_grid, Instance};
use edge_search::oracle::oracle_shortest_paths;
use edge_search::{plan, Algorithm, Outcome, PlannerConfig, SearchError, SearchSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub runs: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Thread counts tried for the parallel planners.
const THREADS: [usize; 2] = [1, 4];

fn configs(w: f64, eps: f64) -> Vec<PlannerConfig> {
    let mut out = Vec::new();
    for alg in Algorithm::ALL {
        let threads: &[usize] = if alg.is_serial() { &[1] } else { &THREADS };
        for &t in threads {
            out.push(PlannerConfig::new(alg).threads(t).weight(w).epsilon(eps).audit(true));
        }
    }
    out
}

fn label(c: &PlannerConfig) -> String {
    format!("{} N_t={} w={} eps={}", c.algorithm, c.num_threads, c.weight, c.epsilon)
}

fn check_instance<Sp: SearchSpace>(
    inst: &Instance<Sp>,
    tag: &str,
    optimality: &mut Check,
    bounded: &mut Check,
    audit: &mut Check,
) -> Result<(), SearchError> {
    let opt = oracle_shortest_paths(&inst.space, &inst.start, false)?
        .optimal_cost
        .ok_or(SearchError::InvalidConfig(format!("{tag} is unsolvable")))?;
    for (w, eps) in [(1.0, 1.0), (1.5, 1.5), (5.0, 5.0), (1.5, 3.0)] {
        for c in configs(w, eps) {
            let res = plan(&inst.space, &inst.start, &c)?;
            let exact = w == 1.0 && eps == 1.0 && c.algorithm != Algorithm::WeightedAstar
                || c.algorithm == Algorithm::Astar;
            let check = if exact { &mut *optimality } else { &mut *bounded };
            check.runs += 1;
            let bound = if c.algorithm == Algorithm::Astar { 1.0 } else { eps.max(c.effective_weight()) };
            let ok = if exact { res.cost == opt } else { res.cost <= bound * opt };
            if !ok {
                check.failures.push(format!("{tag}: {} cost {} vs optimum {opt}", label(&c), res.cost));
            }
            if let Some(log) = &res.audit {
                audit.runs += 1;
                if log.duplicate_evaluations() + log.duplicate_closings() > 0 {
                    audit.failures.push(format!("{tag}: {} re-expanded", label(&c)));
                }
            }
        }
    }
    Ok(())
}

/// Runs every check on `n` instances of each kind.
pub fn run_checks(n: usize, seed: u64) -> Result<Vec<Check>, SearchError> {
    let mut optimality = Check { name: "optimal at w=eps=1", runs: 0, failures: vec![] };
    let mut bounded = Check { name: "cost within max(w, eps) of optimal", runs: 0, failures: vec![] };
    let mut audit = Check { name: "no re-expansion", runs: 0, failures: vec![] };
    let mut complete = Check { name: "no solution when walled off", runs: 0, failures: vec![] };
    for i in 0..n as u64 {
        let grid = random_grid(seed + i, 20, 20, 0.2)?;
        check_instance(&grid, &format!("grid {}", seed + i), &mut optimality, &mut bounded, &mut audit)?;
        let graph = random_explicit_graph(seed + i, 60, 3.0, (1.0, 2.0), true)?;
        check_instance(&graph, &format!("graph {}", seed + i), &mut optimality, &mut bounded, &mut audit)?;
        let walled = walled_goal_grid(seed + i, 12, 12, 0.1)?;
        for c in configs(1.0, 1.0) {
            complete.runs += 1;
            let res = plan(&walled.space, &walled.start, &c)?;
            if res.outcome != Outcome::NoSolution {
                complete.failures.push(format!("walled {}: {} gave {}", seed + i, label(&c), res.outcome));
            }
        }
    }
    Ok(vec![optimality, bounded, audit, complete])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_a_couple_of_instances() {
        let checks = run_checks(2, 11).unwrap();
        assert_eq!(checks.len(), 4);
        for c in &checks {
            assert!(c.runs > 0, "{}", c.name);
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }
}
