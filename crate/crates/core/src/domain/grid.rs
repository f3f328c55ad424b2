use super::delay::{splitmix, DelayModel};
use super::map::OccupancyGrid;
use crate::error::SearchError;
use crate::space::{Cost, SearchSpace, Transition};

/// Lattice state: cell coordinates plus a heading bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridState {
    pub x: i32,
    pub y: i32,
    pub heading: u16,
}

impl GridState {
    pub fn new(x: i32, y: i32, heading: u16) -> Self {
        GridState { x, y, heading }
    }

    fn hash64(&self) -> u64 {
        splitmix(((self.x as u32 as u64) << 32) | self.y as u32 as u64) ^ self.heading as u64
    }
}

/// Motion primitive in the world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub dx: i32,
    pub dy: i32,
    pub dtheta: i32,
    pub cost: Cost,
}

const fn prim(dx: i32, dy: i32, dtheta: i32, cost: Cost) -> Primitive {
    Primitive {
        dx,
        dy,
        dtheta,
        cost,
    }
}

// Diagonals cost 1.5 rather than sqrt(2): every cost is a multiple of 0.5,
// so path sums are exact in f64 whatever the summation order.
const STRAIGHT: Cost = 1.0;
const DIAGONAL: Cost = 1.5;
const TURN: Cost = 1.0;
const MOVE_AND_TURN: Cost = 1.5;

impl Primitive {
    pub fn displacement(&self) -> f64 {
        ((self.dx * self.dx + self.dy * self.dy) as f64).sqrt()
    }

    pub fn four_connected() -> Vec<Primitive> {
        vec![
            prim(1, 0, 0, STRAIGHT),
            prim(0, 1, 0, STRAIGHT),
            prim(-1, 0, 0, STRAIGHT),
            prim(0, -1, 0, STRAIGHT),
        ]
    }

    pub fn eight_connected() -> Vec<Primitive> {
        let mut p = Self::four_connected();
        p.extend([
            prim(1, 1, 0, DIAGONAL),
            prim(-1, 1, 0, DIAGONAL),
            prim(-1, -1, 0, DIAGONAL),
            prim(1, -1, 0, DIAGONAL),
        ]);
        p
    }

    /// The 18-primitive (x, y, theta) set: the eight planar moves at fixed
    /// heading, turning in place by one heading bin either way, and each
    /// axis-aligned move combined with a one-bin turn either way.
    pub fn lattice18() -> Vec<Primitive> {
        let mut p = Self::eight_connected();
        p.extend([prim(0, 0, 1, TURN), prim(0, 0, -1, TURN)]);
        for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            p.push(prim(dx, dy, 1, MOVE_AND_TURN));
            p.push(prim(dx, dy, -1, MOVE_AND_TURN));
        }
        p
    }
}

/// Goal predicate over cell position; heading is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GoalRegion {
    /// Inclusive cell rectangle.
    Rect { x0: i32, y0: i32, x1: i32, y1: i32 },
    /// Cells within `radius` of `(x, y)`.
    Radius { x: i32, y: i32, radius: f64 },
}

impl GoalRegion {
    pub fn cell(x: i32, y: i32) -> Self {
        GoalRegion::Rect {
            x0: x,
            y0: y,
            x1: x,
            y1: y,
        }
    }

    pub fn contains(&self, x: i32, y: i32) -> bool {
        self.distance(x, y) == 0.0
    }

    /// Euclidean distance from `(x, y)` to the region; 0 inside.
    pub fn distance(&self, x: i32, y: i32) -> f64 {
        match *self {
            GoalRegion::Rect { x0, y0, x1, y1 } => {
                let dx = (x0 - x).max(0).max(x - x1) as f64;
                let dy = (y0 - y).max(0).max(y - y1) as f64;
                dx.hypot(dy)
            }
            GoalRegion::Radius { x: cx, y: cy, radius } => {
                let d = ((x - cx) as f64).hypot((y - cy) as f64);
                if d <= radius {
                    0.0
                } else {
                    d - radius
                }
            }
        }
    }
}

/// Grid navigation over `(x, y, heading)` with motion primitives.
///
/// Evaluating an edge checks the cells swept by the primitive at
/// `sample_step` resolution and then burns the configured synthetic delay,
/// also for edges that turn out to collide. Heuristics are Euclidean over
/// position and ignore heading; every primitive costs at least its
/// displacement, which keeps them admissible.
#[derive(Debug, Clone)]
pub struct GridDomain {
    map: OccupancyGrid,
    num_headings: u16,
    primitives: Vec<Primitive>,
    goal: GoalRegion,
    delay: DelayModel,
    sample_step: f64,
}

impl GridDomain {
    pub fn new(
        map: OccupancyGrid,
        primitives: Vec<Primitive>,
        num_headings: u16,
        goal: GoalRegion,
    ) -> Result<Self, SearchError> {
        if num_headings == 0 {
            return Err(SearchError::InvalidConfig("num_headings must be >= 1".into()));
        }
        if primitives.is_empty() {
            return Err(SearchError::InvalidConfig("no motion primitives".into()));
        }
        for p in &primitives {
            if !(p.cost >= p.displacement()) {
                return Err(SearchError::InvalidConfig(format!(
                    "primitive {p:?} costs less than its displacement"
                )));
            }
        }
        Ok(GridDomain {
            map,
            num_headings,
            primitives,
            goal,
            delay: DelayModel::None,
            sample_step: 0.25,
        })
    }

    pub fn with_delay(mut self, delay: DelayModel) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_goal(mut self, goal: GoalRegion) -> Self {
        self.goal = goal;
        self
    }

    pub fn map(&self) -> &OccupancyGrid {
        &self.map
    }

    pub fn goal(&self) -> GoalRegion {
        self.goal
    }

    pub fn delay(&self) -> &DelayModel {
        &self.delay
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn num_headings(&self) -> u16 {
        self.num_headings
    }

    pub fn is_free(&self, s: &GridState) -> bool {
        !self.map.is_blocked(s.x as i64, s.y as i64) && s.heading < self.num_headings
    }

    /// Whether the straight sweep between the two cell centres touches a
    /// blocked cell. A sample on a cell border touches both neighbours.
    fn sweep_collides(&self, from: (i32, i32), to: (i32, i32)) -> bool {
        let (fx, fy) = (from.0 as f64 + 0.5, from.1 as f64 + 0.5);
        let (tx, ty) = (to.0 as f64 + 0.5, to.1 as f64 + 0.5);
        let len = (tx - fx).hypot(ty - fy);
        let n = ((len / self.sample_step).ceil() as usize).max(1);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let (px, py) = (fx + (tx - fx) * t, fy + (ty - fy) * t);
            for cx in touched(px) {
                for cy in touched(py) {
                    if self.map.is_blocked(cx, cy) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn apply(&self, s: &GridState, action: usize) -> Option<Transition<GridState>> {
        let p = self.primitives.get(action)?;
        let h = self.num_headings as i32;
        if h == 1 && p.dtheta != 0 {
            return None;
        }
        let next = GridState {
            x: s.x + p.dx,
            y: s.y + p.dy,
            heading: (s.heading as i32 + p.dtheta).rem_euclid(h) as u16,
        };
        if !self.map.in_bounds(next.x as i64, next.y as i64)
            || self.sweep_collides((s.x, s.y), (next.x, next.y))
        {
            return None;
        }
        Some(Transition {
            successor: next,
            cost: p.cost,
        })
    }
}

fn touched(p: f64) -> impl Iterator<Item = i64> {
    let base = p.floor() as i64;
    let on_border = p == p.floor();
    std::iter::once(base).chain(on_border.then_some(base - 1))
}

impl SearchSpace for GridDomain {
    type State = GridState;

    fn num_actions(&self, _state: &GridState) -> usize {
        self.primitives.len()
    }

    fn evaluate(&self, state: &GridState, action: usize) -> Option<Transition<GridState>> {
        let out = self.apply(state, action);
        self.delay.run(state.hash64(), action);
        out
    }

    fn evaluate_without_delay(&self, state: &GridState, action: usize) -> Option<Transition<GridState>> {
        self.apply(state, action)
    }

    fn heuristic(&self, state: &GridState) -> Cost {
        self.goal.distance(state.x, state.y)
    }

    fn pairwise_heuristic(&self, from: &GridState, to: &GridState) -> Cost {
        ((from.x - to.x) as f64).hypot((from.y - to.y) as f64)
    }

    fn is_goal(&self, state: &GridState) -> bool {
        self.goal.contains(state.x, state.y)
    }
}
