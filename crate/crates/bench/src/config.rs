//! Benchmark configuration: an INI file plus command-line overrides.

use std::path::{Path, PathBuf};
use std::time::Duration;

use edge_search::domain::{load_map, DelayModel, GoalRegion, GridDomain, OccupancyGrid, Primitive};
use edge_search::{Algorithm, ThreadManagement};
use ini::Ini;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveSet {
    Four,
    Eight,
    Lattice18,
}

impl PrimitiveSet {
    pub fn primitives(self) -> Vec<Primitive> {
        match self {
            PrimitiveSet::Four => Primitive::four_connected(),
            PrimitiveSet::Eight => Primitive::eight_connected(),
            PrimitiveSet::Lattice18 => Primitive::lattice18(),
        }
    }

    pub fn parse(s: &str) -> Result<Self, BenchError> {
        match s.trim() {
            "4" | "four" => Ok(PrimitiveSet::Four),
            "8" | "eight" => Ok(PrimitiveSet::Eight),
            "18" | "lattice18" | "lattice" => Ok(PrimitiveSet::Lattice18),
            other => Err(BenchError::Config(format!("unknown primitive set `{other}`"))),
        }
    }
}

/// How benchmark instances are built. One map per matrix, a fresh
/// start/goal pair per trial.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainConfig {
    /// Map file; a random map is generated when unset.
    pub map: Option<PathBuf>,
    pub width: usize,
    pub height: usize,
    pub density: f64,
    pub primitives: PrimitiveSet,
    pub num_headings: u16,
    pub delay: DelayModel,
    /// Minimum straight-line start/goal distance in cells.
    pub min_distance: f64,
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig {
            map: None,
            width: 40,
            height: 40,
            density: 0.15,
            primitives: PrimitiveSet::Lattice18,
            num_headings: 4,
            delay: DelayModel::None,
            min_distance: 15.0,
        }
    }
}

impl DomainConfig {
    /// Small lattice map for runs with expensive evaluations: a few dozen
    /// evaluations per ePA*SE trial at w = 5.
    pub fn timing() -> Self {
        DomainConfig {
            width: 20,
            height: 20,
            density: 0.05,
            min_distance: 10.0,
            ..DomainConfig::default()
        }
    }

    /// The map-level domain; its goal is a placeholder replaced per trial.
    pub fn base_domain(&self, seed: u64) -> Result<GridDomain, BenchError> {
        let map = match &self.map {
            Some(path) => load_map(path)?,
            None => random_map(seed, self.width, self.height, self.density),
        };
        let dom = GridDomain::new(map, self.primitives.primitives(), self.num_headings, GoalRegion::cell(0, 0))?
            .with_delay(self.delay.clone());
        Ok(dom)
    }
}

fn random_map(seed: u64, width: usize, height: usize, density: f64) -> OccupancyGrid {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_70);
    edge_search::domain::random_occupancy(&mut rng, width, height, density)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub thread_counts: Vec<usize>,
    /// (w, ε) pairs.
    pub pairs: Vec<(f64, f64)>,
    pub trials: usize,
    pub seed: u64,
    pub time_limit: Duration,
    pub thread_mgt: ThreadManagement,
    pub full_open_scan: bool,
    pub domain: DomainConfig,
    pub out: PathBuf,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: vec![Algorithm::WeightedAstar, Algorithm::Epase],
            thread_counts: vec![1, 2, 4, 8],
            pairs: vec![(5.0, 5.0)],
            trials: 10,
            seed: 1,
            time_limit: Duration::from_secs(60),
            thread_mgt: ThreadManagement::SpawnOnDemand,
            full_open_scan: false,
            domain: DomainConfig::default(),
            out: PathBuf::from("bench-out"),
        }
    }
}

impl BenchConfig {
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let ini = Ini::load_from_file(path).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
        Self::from_ini(&ini, path.parent())
    }

    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let ini = Ini::load_from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        Self::from_ini(&ini, None)
    }

    /// Relative file paths in the config are resolved against `base`.
    fn from_ini(ini: &Ini, base: Option<&Path>) -> Result<Self, BenchError> {
        let mut cfg = BenchConfig::default();
        let resolve = |p: &str| match base {
            Some(b) if Path::new(p).is_relative() => b.join(p),
            _ => PathBuf::from(p),
        };
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let value = value.trim();
                match (section.unwrap_or("matrix"), key) {
                    ("matrix", "algorithms") => cfg.algorithms = parse_algorithms(value)?,
                    ("matrix", "threads") => cfg.thread_counts = parse_list(value)?,
                    ("matrix", "pairs") => cfg.pairs = parse_pairs(value)?,
                    ("matrix", "trials") => cfg.trials = parse_num(key, value)?,
                    ("matrix", "seed") => cfg.seed = parse_num(key, value)?,
                    ("matrix", "time_limit") => cfg.time_limit = parse_duration(value)?,
                    ("matrix", "thread_mgt") => cfg.thread_mgt = parse_thread_mgt(value)?,
                    ("matrix", "full_open_scan") => cfg.full_open_scan = parse_num(key, value)?,
                    ("matrix", "out") => cfg.out = resolve(value),
                    ("domain", "map") => cfg.domain.map = Some(resolve(value)),
                    ("domain", "width") => cfg.domain.width = parse_num(key, value)?,
                    ("domain", "height") => cfg.domain.height = parse_num(key, value)?,
                    ("domain", "density") => cfg.domain.density = parse_num(key, value)?,
                    ("domain", "primitives") => cfg.domain.primitives = PrimitiveSet::parse(value)?,
                    ("domain", "headings") => cfg.domain.num_headings = parse_num(key, value)?,
                    ("domain", "delay") => cfg.domain.delay = parse_delay_in(value, base)?,
                    ("domain", "min_distance") => cfg.domain.min_distance = parse_num(key, value)?,
                    (s, k) => return Err(BenchError::Config(format!("unknown key `{k}` in [{s}]"))),
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.algorithms.is_empty() {
            return bad("no algorithms");
        }
        if self.thread_counts.is_empty() || self.thread_counts.contains(&0) {
            return bad("thread counts must be positive");
        }
        if self.pairs.is_empty() {
            return bad("no (w, eps) pairs");
        }
        if self.pairs.iter().any(|&(w, e)| !(w >= 1.0 && e >= 1.0)) {
            return bad("w and eps must be >= 1");
        }
        if self.trials == 0 {
            return bad("trials must be positive");
        }
        if !(0.0..1.0).contains(&self.domain.density) {
            return bad("density must be in [0, 1)");
        }
        if self.domain.num_headings == 0 {
            return bad("headings must be positive");
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, BenchError> {
    value
        .parse()
        .map_err(|_| BenchError::Config(format!("bad value `{value}` for `{key}`")))
}

pub fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, BenchError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| BenchError::Config(format!("bad list item `{s}`"))))
        .collect()
}

pub fn parse_algorithms(value: &str) -> Result<Vec<Algorithm>, BenchError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(BenchError::Config))
        .collect()
}

/// `w:eps` items separated by commas, e.g. `1.5:1.5, 1.5:3`.
pub fn parse_pairs(value: &str) -> Result<Vec<(f64, f64)>, BenchError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (w, e) = item
                .split_once(':')
                .ok_or_else(|| BenchError::Config(format!("pair `{item}` is not w:eps")))?;
            Ok((parse_num("w", w.trim())?, parse_num("eps", e.trim())?))
        })
        .collect()
}

pub fn parse_thread_mgt(value: &str) -> Result<ThreadManagement, BenchError> {
    match value {
        "spawn" | "spawn_on_demand" | "on-demand" => Ok(ThreadManagement::SpawnOnDemand),
        "prealloc" | "preallocated" | "preallocated_pool" | "pool" => Ok(ThreadManagement::PreallocatedPool),
        other => Err(BenchError::Config(format!("unknown thread management `{other}`"))),
    }
}

/// Plain seconds (`2.5`) or a humantime span (`1m 30s`).
pub fn parse_duration(value: &str) -> Result<Duration, BenchError> {
    if let Ok(secs) = value.parse::<f64>() {
        return Duration::try_from_secs_f64(secs).map_err(|e| BenchError::Config(e.to_string()));
    }
    humantime::parse_duration(value).map_err(|e| BenchError::Config(format!("bad duration `{value}`: {e}")))
}

/// `none`, `fixed:10ms`, `per-action:FILE` or `lognormal:MU,SIGMA`.
pub fn parse_delay(value: &str) -> Result<DelayModel, BenchError> {
    parse_delay_in(value, None)
}

fn parse_delay_in(value: &str, base: Option<&Path>) -> Result<DelayModel, BenchError> {
    let (kind, arg) = value.split_once(':').unwrap_or((value, ""));
    match kind.trim() {
        "none" => Ok(DelayModel::None),
        "fixed" => Ok(DelayModel::Fixed(parse_duration(arg.trim())?)),
        "per-action" | "per_action" => {
            let path = match base {
                Some(b) if Path::new(arg).is_relative() => b.join(arg),
                _ => PathBuf::from(arg),
            };
            let text = std::fs::read_to_string(&path)
                .map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
            let table = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(parse_duration)
                .collect::<Result<Vec<_>, _>>()?;
            if table.is_empty() {
                return Err(BenchError::Config(format!("{}: no durations", path.display())));
            }
            Ok(DelayModel::PerAction(table))
        }
        "lognormal" => {
            let (mu, sigma) = arg
                .split_once(',')
                .ok_or_else(|| BenchError::Config(format!("lognormal needs MU,SIGMA, got `{arg}`")))?;
            let sigma: f64 = parse_num("sigma", sigma.trim())?;
            if !(sigma >= 0.0) {
                return Err(BenchError::Config("sigma must be >= 0".into()));
            }
            Ok(DelayModel::LogNormal {
                mu: parse_num("mu", mu.trim())?,
                sigma,
                seed: 0,
            })
        }
        other => Err(BenchError::Config(format!("unknown delay model `{other}`"))),
    }
}
