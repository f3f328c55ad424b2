mod common;

use std::collections::HashSet;
use std::time::Duration;

use common::*;
use edge_search::domain::{random_explicit_graph, random_grid, walled_goal_grid, RandomGrid};
use edge_search::oracle::oracle_shortest_paths;
use edge_search::{plan, Algorithm, Outcome, PlannerConfig, SearchError, SearchSpace, ThreadManagement};

fn cfg(alg: Algorithm, threads: usize) -> PlannerConfig {
    PlannerConfig::new(alg).threads(threads)
}

#[test]
fn five_by_five_costs_eight_for_every_algorithm() {
    let space = open_four_connected(5, 5, (4, 4));
    for alg in Algorithm::ALL {
        for threads in [1, 4] {
            let res = plan(&space, &origin(), &cfg(alg, threads)).unwrap();
            assert_eq!(res.outcome, Outcome::Solved, "{alg} x{threads}");
            assert_eq!(res.cost, 8.0, "{alg} x{threads}");
            assert_eq!(res.path.len(), 8);
        }
    }
}

#[test]
fn start_in_goal_gives_empty_path() {
    let space = open_four_connected(3, 3, (0, 0));
    for alg in Algorithm::ALL {
        let res = plan(&space, &origin(), &cfg(alg, 2)).unwrap();
        assert!(res.is_solved());
        assert!(res.path.is_empty());
        assert_eq!(res.cost, 0.0);
    }
}

#[test]
fn disconnected_goal_reports_no_solution() {
    for seed in 0..3 {
        let inst = walled_goal_grid(seed, 12, 12, 0.1).unwrap();
        for alg in Algorithm::ALL {
            let res = plan(&inst.space, &inst.start, &cfg(alg, 4)).unwrap();
            assert_eq!(res.outcome, Outcome::NoSolution, "{alg}");
            assert_eq!(res.stats.be_size_at_exit, 0, "{alg}");
            assert!(res.path.is_empty());
        }
    }
}

#[test]
fn epase_matches_oracle_on_random_grids() {
    for seed in 0..100 {
        let inst = random_grid(seed, 50, 50, 0.2).unwrap();
        let opt = oracle_shortest_paths(&inst.space, &inst.start, false)
            .unwrap()
            .optimal_cost
            .unwrap();
        let res = plan(&inst.space, &inst.start, &cfg(Algorithm::Epase, 8)).unwrap();
        assert_eq!(res.cost, opt, "seed {seed}");
    }
}

#[test]
fn wpase_matches_oracle_on_random_grids() {
    for seed in 0..100 {
        let inst = random_grid(1000 + seed, 50, 50, 0.2).unwrap();
        let opt = oracle_shortest_paths(&inst.space, &inst.start, false)
            .unwrap()
            .optimal_cost
            .unwrap();
        let res = plan(&inst.space, &inst.start, &cfg(Algorithm::Wpase, 4)).unwrap();
        assert_eq!(res.cost, opt, "seed {seed}");
    }
}

#[test]
fn paths_are_connected_and_sum_to_cost() {
    for seed in 0..10 {
        let inst = random_grid(seed, 30, 30, 0.25).unwrap();
        for alg in Algorithm::ALL {
            let config = cfg(alg, 3).weight(2.0).epsilon(2.0);
            let res = plan(&inst.space, &inst.start, &config).unwrap();
            assert!(res.is_solved());
            let mut at = inst.start;
            let mut sum = 0.0;
            for e in &res.path {
                assert_eq!(e.source, at);
                let t = inst.space.evaluate_without_delay(&e.source, e.action).unwrap();
                assert_eq!(t.successor, e.successor);
                assert_eq!(t.cost, e.cost);
                sum += t.cost;
                at = e.successor;
            }
            assert!(inst.space.is_goal(&at));
            assert_eq!(sum, res.cost, "{alg} seed {seed}");
        }
    }
}

#[test]
fn walkthrough_eastar_skips_unpromising_edges() {
    let g = walkthrough_graph();
    let res = plan(&g, &0, &cfg(Algorithm::EdgeAstar, 1).audit(true)).unwrap();
    assert_eq!(res.cost, 3.0);
    let evaluated: HashSet<(usize, usize)> = res.audit.unwrap().evaluations.into_keys().collect();
    // (state, action index): e01, e14, e46.
    assert_eq!(evaluated, HashSet::from([(0, 0), (1, 0), (4, 0)]));
    assert_eq!(res.stats.edges_evaluated, 3);

    let res = plan(&g, &0, &cfg(Algorithm::WeightedAstar, 1).audit(true)).unwrap();
    let evaluated: HashSet<(usize, usize)> = res.audit.unwrap().evaluations.into_keys().collect();
    for e in [(0, 1), (0, 2), (1, 1)] {
        assert!(evaluated.contains(&e), "{e:?}");
    }
    assert_eq!(res.stats.edges_evaluated, 6);
}

#[test]
fn spawn_on_demand_stays_small_on_a_ladder() {
    let space = Sleepy {
        inner: ladder(12),
        delay: Duration::from_millis(2),
    };
    let res = plan(&space, &0, &cfg(Algorithm::Epase, 8)).unwrap();
    assert_eq!(res.cost, 12.0);
    assert!(res.stats.threads_spawned <= 3, "{}", res.stats.threads_spawned);
    assert!(res.stats.threads_spawned >= 1);
}

#[test]
fn preallocated_pool_spawns_the_whole_budget() {
    let space = ladder(3);
    let config = cfg(Algorithm::Epase, 8).thread_mgt(ThreadManagement::PreallocatedPool);
    let res = plan(&space, &0, &config).unwrap();
    assert!(res.is_solved());
    assert_eq!(res.stats.threads_spawned, 8);
    let res = plan(&space, &0, &config.clone().threads(3)).unwrap();
    assert_eq!(res.stats.threads_spawned, 3);
}

#[test]
fn serial_runs_are_repeatable() {
    let inst = random_grid(5, 40, 40, 0.2).unwrap();
    for alg in [Algorithm::Astar, Algorithm::WeightedAstar, Algorithm::EdgeAstar] {
        let config = cfg(alg, 1).weight(2.0);
        let a = plan(&inst.space, &inst.start, &config).unwrap();
        let b = plan(&inst.space, &inst.start, &config).unwrap();
        assert_eq!(a.stats.counters(), b.stats.counters(), "{alg}");
        assert_eq!(a.path, b.path, "{alg}");
    }
}

#[test]
fn delays_do_not_change_serial_search() {
    use edge_search::domain::DelayModel;
    let plain = RandomGrid { width: 20, height: 20, ..RandomGrid::default() }.generate(8).unwrap();
    let slow = RandomGrid {
        width: 20,
        height: 20,
        delay: DelayModel::Fixed(Duration::from_micros(20)),
        ..RandomGrid::default()
    }
    .generate(8)
    .unwrap();
    for alg in [Algorithm::Astar, Algorithm::EdgeAstar] {
        let a = plan(&plain.space, &plain.start, &cfg(alg, 1)).unwrap();
        let b = plan(&slow.space, &slow.start, &cfg(alg, 1)).unwrap();
        assert_eq!(a.stats.counters(), b.stats.counters());
        assert_eq!(a.path, b.path);
    }
}

#[test]
fn eastar_evaluates_no_more_than_wastar() {
    for seed in 0..10 {
        let space = open_four_connected(20, 20, (15, 11));
        let _ = seed;
        let e = plan(&space, &origin(), &cfg(Algorithm::EdgeAstar, 1)).unwrap();
        let w = plan(&space, &origin(), &cfg(Algorithm::Astar, 1)).unwrap();
        assert_eq!(e.cost, w.cost);
        assert!(e.stats.edges_evaluated <= w.stats.edges_evaluated);
    }
    for seed in 0..10 {
        let inst = random_grid(seed, 30, 30, 0.0).unwrap();
        let e = plan(&inst.space, &inst.start, &cfg(Algorithm::EdgeAstar, 1)).unwrap();
        let w = plan(&inst.space, &inst.start, &cfg(Algorithm::Astar, 1)).unwrap();
        assert_eq!(e.cost, w.cost);
        assert!(e.stats.edges_evaluated <= w.stats.edges_evaluated, "seed {seed}");
    }
}

#[test]
fn pwastar_follows_wastar() {
    for seed in 0..10 {
        let inst = random_grid(seed, 30, 30, 0.2).unwrap();
        let config = cfg(Algorithm::WeightedAstar, 1).weight(3.0);
        let w = plan(&inst.space, &inst.start, &config).unwrap();
        for threads in [1, 4] {
            let mut c = config.clone().threads(threads);
            c.algorithm = Algorithm::ParallelWeightedAstar;
            let p = plan(&inst.space, &inst.start, &c).unwrap();
            assert_eq!(p.cost, w.cost);
            assert_eq!(p.stats.edges_evaluated, w.stats.edges_evaluated);
            assert_eq!(p.stats.states_expanded, w.stats.states_expanded);
        }
    }
}

#[test]
fn single_worker_wpase_follows_astar() {
    for seed in 0..10 {
        let inst = random_grid(seed, 30, 30, 0.2).unwrap();
        let a = plan(&inst.space, &inst.start, &cfg(Algorithm::Astar, 1)).unwrap();
        let p = plan(&inst.space, &inst.start, &cfg(Algorithm::Wpase, 1)).unwrap();
        assert_eq!(p.cost, a.cost);
        assert_eq!(p.stats.states_expanded, a.stats.states_expanded);
    }
}

#[test]
fn single_worker_epase_picks_the_front_when_nothing_is_running() {
    for seed in 0..10 {
        let inst = random_grid(seed, 30, 30, 0.2).unwrap();
        let res = plan(&inst.space, &inst.start, &cfg(Algorithm::Epase, 1).audit(true)).unwrap();
        let log = res.audit.unwrap();
        assert!(!log.selections.is_empty());
        for s in log.selections.iter().filter(|s| s.be_len == 0) {
            assert_eq!(s.rank, 0);
        }
    }
}

#[test]
fn nothing_is_evaluated_or_closed_twice() {
    for seed in 0..10 {
        let inst = random_explicit_graph(seed, 150, 4.0, (1.0, 2.0), true).unwrap();
        for alg in Algorithm::ALL {
            let config = cfg(alg, 4).weight(2.0).epsilon(2.0).audit(true);
            let res = plan(&inst.space, &inst.start, &config).unwrap();
            let log = res.audit.unwrap();
            assert_eq!(log.duplicate_evaluations(), 0, "{alg}");
            assert_eq!(log.duplicate_closings(), 0, "{alg}");
            let total: u64 = log.evaluations.values().map(|&n| n as u64).sum();
            assert_eq!(total, res.stats.edges_evaluated, "{alg}");
        }
    }
}

#[test]
fn worker_panic_fails_the_run() {
    let space = Booby {
        inner: open_four_connected(6, 6, (5, 5)),
        state: origin(),
        action: 0,
    };
    for alg in [Algorithm::Epase, Algorithm::Wpase, Algorithm::ParallelWeightedAstar] {
        let err = plan(&space, &origin(), &cfg(alg, 2)).unwrap_err();
        assert!(matches!(err, SearchError::WorkerPanicked(ref m) if m.contains("blew up")), "{alg}: {err:?}");
    }
}

#[test]
fn time_limit_is_enforced() {
    let space = Sleepy {
        inner: open_four_connected(30, 30, (29, 29)),
        delay: Duration::from_millis(5),
    };
    for alg in Algorithm::ALL {
        let config = cfg(alg, 2).time_limit(Duration::from_millis(60));
        let res = plan(&space, &origin(), &config).unwrap();
        assert_eq!(res.outcome, Outcome::Timeout, "{alg}");
        assert!(res.stats.wall_time < Duration::from_secs(2), "{alg}");
    }
}

#[test]
fn busy_wait_mode_still_solves() {
    let inst = random_grid(3, 25, 25, 0.2).unwrap();
    let opt = oracle_shortest_paths(&inst.space, &inst.start, false)
        .unwrap()
        .optimal_cost
        .unwrap();
    for alg in [Algorithm::Epase, Algorithm::Wpase] {
        let res = plan(&inst.space, &inst.start, &cfg(alg, 2).busy_wait(true)).unwrap();
        assert_eq!(res.cost, opt);
    }
}

#[test]
fn suboptimality_stays_within_epsilon() {
    for seed in 0..20 {
        let inst = random_grid(seed, 40, 40, 0.25).unwrap();
        let opt = oracle_shortest_paths(&inst.space, &inst.start, false)
            .unwrap()
            .optimal_cost
            .unwrap();
        for (w, eps) in [(1.5, 1.5), (5.0, 5.0), (1.5, 3.0)] {
            for alg in [Algorithm::Epase, Algorithm::Wpase] {
                let res = plan(&inst.space, &inst.start, &cfg(alg, 4).weight(w).epsilon(eps)).unwrap();
                assert!(res.cost <= eps * opt + 1e-9, "{alg} ({w},{eps}) seed {seed}");
            }
        }
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn every_algorithm_agrees_with_the_oracle(seed in any::<u64>(), degree in 1.0f64..4.0, threads in 1usize..5) {
            let inst = random_explicit_graph(seed, 60, degree, (1.0, 1.5), false).unwrap();
            let opt = oracle_shortest_paths(&inst.space, &inst.start, false).unwrap().optimal_cost;
            for alg in Algorithm::ALL {
                let res = plan(&inst.space, &inst.start, &cfg(alg, threads)).unwrap();
                match opt {
                    Some(c) => prop_assert_eq!(res.cost, c, "{}", alg),
                    None => prop_assert_eq!(res.outcome, Outcome::NoSolution, "{}", alg),
                }
            }
        }
    }
}
