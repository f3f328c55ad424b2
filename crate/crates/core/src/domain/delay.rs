use std::hint::black_box;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

/// Synthetic cost of evaluating an edge.
///
/// The delay is spent in a calibrated busy loop so that it occupies a core
/// the way collision checking would; sleeping would let the scheduler hide
/// it.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum DelayModel {
    #[default]
    None,
    Fixed(Duration),
    /// Indexed by action; actions past the end use the last entry.
    PerAction(Vec<Duration>),
    /// `exp(N(mu, sigma))` milliseconds, drawn from a hash of
    /// `(seed, state, action)` so draws do not depend on thread schedule.
    LogNormal { mu: f64, sigma: f64, seed: u64 },
}

impl DelayModel {
    pub fn is_none(&self) -> bool {
        matches!(self, DelayModel::None)
    }

    /// Delay of action `action` at a state whose hash is `state_hash`.
    pub fn duration(&self, state_hash: u64, action: usize) -> Duration {
        match self {
            DelayModel::None => Duration::ZERO,
            DelayModel::Fixed(d) => *d,
            DelayModel::PerAction(table) => table
                .get(action)
                .or(table.last())
                .copied()
                .unwrap_or(Duration::ZERO),
            DelayModel::LogNormal { mu, sigma, seed } => {
                let mixed = splitmix(splitmix(*seed ^ state_hash) ^ action as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(mixed);
                match LogNormal::new(*mu, *sigma) {
                    Ok(dist) => Duration::from_secs_f64(dist.sample(&mut rng) / 1000.0),
                    Err(_) => Duration::ZERO,
                }
            }
        }
    }

    pub fn run(&self, state_hash: u64, action: usize) {
        if !self.is_none() {
            busy_wait(self.duration(state_hash, action));
        }
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// CPU time consumed by the calling thread.
pub fn thread_cpu_time() -> Duration {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid out-pointer and the clock id is a constant.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return Duration::ZERO;
    }
    Duration::new(ts.tv_sec as u64, ts.tv_nsec as u32)
}

fn spin(iters: u64) {
    let mut x: u64 = 0x2545_F491_4F6C_DD1D;
    for i in 0..iters {
        x = black_box(x.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(i));
    }
    black_box(x);
}

/// Burns `d` of CPU time on the calling thread. Time the thread spends
/// descheduled does not count.
pub fn busy_wait(d: Duration) {
    if d.is_zero() {
        return;
    }
    let t0 = thread_cpu_time();
    while thread_cpu_time() - t0 < d {
        spin(256);
    }
}
