//! Concrete search spaces.

mod delay;
mod explicit;
mod grid;
mod map;
mod random;

pub use delay::{busy_wait, thread_cpu_time, DelayModel};
pub use explicit::ExplicitGraph;
pub use grid::{GoalRegion, GridDomain, GridState, Primitive};
pub use map::{load_map, parse_map, MapError, OccupancyGrid};
pub use random::{
    random_explicit_graph, random_grid, random_occupancy, sample_task, walled_goal_grid, Instance,
    RandomGrid,
};
