use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::delay::DelayModel;
use super::explicit::ExplicitGraph;
use super::grid::{GoalRegion, GridDomain, GridState, Primitive};
use super::map::OccupancyGrid;
use crate::error::SearchError;
use crate::oracle::oracle_shortest_paths;
use crate::space::SearchSpace;

/// A search space plus a start state.
#[derive(Debug, Clone)]
pub struct Instance<D: SearchSpace> {
    pub space: D,
    pub start: D::State,
}

fn check_density(density: f64) -> Result<(), SearchError> {
    if (0.0..1.0).contains(&density) {
        Ok(())
    } else {
        Err(SearchError::InvalidConfig(format!(
            "obstacle density must be in [0, 1), got {density}"
        )))
    }
}

pub fn random_occupancy<R: Rng>(rng: &mut R, width: usize, height: usize, density: f64) -> OccupancyGrid {
    let mut map = OccupancyGrid::new(width, height);
    for y in 0..height {
        for x in 0..width {
            if rng.gen::<f64>() < density {
                map.set_blocked(x, y, true);
            }
        }
    }
    map
}

fn random_free_cell<R: Rng>(rng: &mut R, map: &OccupancyGrid) -> Option<(usize, usize)> {
    let free: Vec<_> = map.free_cells().collect();
    free.choose(rng).copied()
}

/// Random grid instances. Deterministic in the seed.
#[derive(Debug, Clone)]
pub struct RandomGrid {
    pub width: usize,
    pub height: usize,
    pub density: f64,
    pub primitives: Vec<Primitive>,
    pub num_headings: u16,
    pub delay: DelayModel,
    /// Rejection-sample until the oracle confirms the goal is reachable.
    pub solvable: bool,
    pub max_attempts: usize,
}

impl Default for RandomGrid {
    fn default() -> Self {
        RandomGrid {
            width: 50,
            height: 50,
            density: 0.2,
            primitives: Primitive::eight_connected(),
            num_headings: 1,
            delay: DelayModel::None,
            solvable: true,
            max_attempts: 1000,
        }
    }
}

impl RandomGrid {
    pub fn generate(&self, seed: u64) -> Result<Instance<GridDomain>, SearchError> {
        check_density(self.density)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..self.max_attempts {
            let map = random_occupancy(&mut rng, self.width, self.height, self.density);
            let (Some(s), Some(g)) = (random_free_cell(&mut rng, &map), random_free_cell(&mut rng, &map)) else {
                continue;
            };
            let start = GridState::new(s.0 as i32, s.1 as i32, rng.gen_range(0..self.num_headings));
            let goal = GoalRegion::cell(g.0 as i32, g.1 as i32);
            let space = GridDomain::new(map, self.primitives.clone(), self.num_headings, goal)?
                .with_delay(self.delay.clone());
            if !self.solvable || oracle_shortest_paths(&space, &start, false)?.reachable() {
                return Ok(Instance { space, start });
            }
        }
        Err(SearchError::GeneratorGaveUp {
            attempts: self.max_attempts,
        })
    }
}

/// Solvable 8-connected random grid.
pub fn random_grid(seed: u64, width: usize, height: usize, density: f64) -> Result<Instance<GridDomain>, SearchError> {
    RandomGrid {
        width,
        height,
        density,
        ..RandomGrid::default()
    }
    .generate(seed)
}

/// Samples a reachable start/goal pair on the map of `domain`, at least
/// `min_distance` apart.
pub fn sample_task(domain: &GridDomain, seed: u64, min_distance: f64, max_attempts: usize) -> Result<Instance<GridDomain>, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = domain.map();
    for _ in 0..max_attempts {
        let (Some(s), Some(g)) = (random_free_cell(&mut rng, map), random_free_cell(&mut rng, map)) else {
            break;
        };
        let d = (s.0 as f64 - g.0 as f64).hypot(s.1 as f64 - g.1 as f64);
        if d < min_distance {
            continue;
        }
        let start = GridState::new(s.0 as i32, s.1 as i32, rng.gen_range(0..domain.num_headings()));
        let space = domain.clone().with_goal(GoalRegion::cell(g.0 as i32, g.1 as i32));
        if oracle_shortest_paths(&space, &start, false)?.reachable() {
            return Ok(Instance { space, start });
        }
    }
    Err(SearchError::GeneratorGaveUp { attempts: max_attempts })
}

/// Random grid whose goal cell sits inside a closed ring of obstacles, with
/// the start outside the ring. No path exists.
pub fn walled_goal_grid(seed: u64, width: usize, height: usize, density: f64) -> Result<Instance<GridDomain>, SearchError> {
    check_density(density)?;
    if width < 8 || height < 8 {
        return Err(SearchError::InvalidConfig("walled grid needs at least 8x8 cells".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = random_occupancy(&mut rng, width, height, density);
    let gx = rng.gen_range(2..width - 2) as i64;
    let gy = rng.gen_range(2..height - 2) as i64;
    for y in 0..height as i64 {
        for x in 0..width as i64 {
            let ring = (x - gx).abs().max((y - gy).abs());
            if ring <= 1 {
                map.set_blocked(x as usize, y as usize, false);
            } else if ring == 2 {
                map.set_blocked(x as usize, y as usize, true);
            }
        }
    }
    let outside: Vec<(usize, usize)> = map
        .free_cells()
        .filter(|&(x, y)| (x as i64 - gx).abs().max((y as i64 - gy).abs()) >= 3)
        .collect();
    let &(sx, sy) = outside
        .choose(&mut rng)
        .ok_or(SearchError::GeneratorGaveUp { attempts: 1 })?;
    let space = GridDomain::new(
        map,
        Primitive::eight_connected(),
        1,
        GoalRegion::cell(gx as i32, gy as i32),
    )?;
    Ok(Instance {
        space,
        start: GridState::new(sx as i32, sy as i32, 0),
    })
}

/// Random geometric digraph on points in a 100 x 100 square. Each state
/// links to about `avg_degree` of its nearer neighbours; an edge costs its
/// Euclidean length times a factor drawn from `cost_range` (lower end
/// >= 1), rounded up to a multiple of 1/1024 so path sums stay exact.
pub fn random_explicit_graph(
    seed: u64,
    num_states: usize,
    avg_degree: f64,
    cost_range: (f64, f64),
    solvable: bool,
) -> Result<Instance<ExplicitGraph>, SearchError> {
    let (lo, hi) = cost_range;
    if num_states < 2 || !(lo >= 1.0) || hi < lo || avg_degree < 0.0 {
        return Err(SearchError::InvalidConfig(format!(
            "bad graph parameters n={num_states} degree={avg_degree} costs={cost_range:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 100;
    for _ in 0..ATTEMPTS {
        let pos: Vec<(f64, f64)> = (0..num_states)
            .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        let mut g = ExplicitGraph::new(num_states);
        for u in 0..num_states {
            let k = avg_degree.floor() as usize + usize::from(rng.gen::<f64>() < avg_degree.fract());
            let mut near: Vec<usize> = (0..num_states).filter(|&v| v != u).collect();
            let d = |v: usize| (pos[u].0 - pos[v].0).hypot(pos[u].1 - pos[v].1);
            near.sort_by(|&a, &b| d(a).total_cmp(&d(b)));
            near.truncate((3 * k).max(k).min(num_states - 1));
            for &v in near.choose_multiple(&mut rng, k.min(near.len())) {
                let factor = if hi > lo { rng.gen_range(lo..hi) } else { lo };
                let cost = (d(v) * factor * 1024.0).ceil() / 1024.0;
                g.add_edge(u, v, cost);
            }
        }
        g.set_positions(pos);
        let start = rng.gen_range(0..num_states);
        let mut goal = rng.gen_range(0..num_states - 1);
        if goal >= start {
            goal += 1;
        }
        g.set_goal(goal);
        if !solvable || oracle_shortest_paths(&g, &start, false)?.reachable() {
            return Ok(Instance { space: g, start });
        }
    }
    Err(SearchError::GeneratorGaveUp { attempts: ATTEMPTS })
}
