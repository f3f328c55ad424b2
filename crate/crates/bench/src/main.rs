use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edge_search::domain::{load_map, GoalRegion, GridDomain, GridState};
use edge_search::oracle::oracle_shortest_paths;
use edge_search_bench::config::{self, BenchConfig, PrimitiveSet};
use edge_search_bench::matrix::run_matrix;
use edge_search_bench::report::{emit_all, summary_table};
use edge_search_bench::verify::run_checks;
use edge_search_bench::BenchError;

/// Benchmarks for the edge-parallel planners. Log verbosity via RUST_LOG.
#[derive(Parser)]
#[command(name = "bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a trial matrix and write CSV tables and plots.
    Run(RunArgs),
    /// Print the optimal cost between two cells of a map.
    Oracle(OracleArgs),
    /// Run the property suite on small instances.
    Verify {
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated algorithm names.
    #[arg(long)]
    algo: Option<String>,
    /// Comma-separated thread counts.
    #[arg(long)]
    threads: Option<String>,
    #[arg(long, requires = "eps")]
    w: Option<f64>,
    #[arg(long, requires = "w")]
    eps: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    map: Option<PathBuf>,
    /// fixed:10ms | per-action:FILE | lognormal:MU,SIGMA | none
    #[arg(long)]
    delay: Option<String>,
    /// Seconds, or a span such as `90s`.
    #[arg(long)]
    time_limit: Option<String>,
    /// spawn | prealloc
    #[arg(long)]
    thread_mgt: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    map: PathBuf,
    /// X,Y
    #[arg(long)]
    start: String,
    /// X,Y
    #[arg(long)]
    goal: String,
    /// 4 | 8 | 18
    #[arg(long, default_value = "8")]
    primitives: String,
    #[arg(long, default_value_t = 1)]
    headings: u16,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Oracle(args) => oracle(args),
        Command::Verify { instances, seed } => verify(instances, seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn build_config(args: RunArgs) -> Result<BenchConfig, BenchError> {
    let mut cfg = match &args.config {
        Some(path) => BenchConfig::load(path)?,
        None => BenchConfig::default(),
    };
    if let Some(a) = &args.algo {
        cfg.algorithms = config::parse_algorithms(a)?;
    }
    if let Some(t) = &args.threads {
        cfg.thread_counts = config::parse_list(t)?;
    }
    if let (Some(w), Some(eps)) = (args.w, args.eps) {
        cfg.pairs = vec![(w, eps)];
    }
    if let Some(n) = args.trials {
        cfg.trials = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(m) = args.map {
        cfg.domain.map = Some(m);
    }
    if let Some(d) = &args.delay {
        cfg.domain.delay = config::parse_delay(d)?;
    }
    if let Some(t) = &args.time_limit {
        cfg.time_limit = config::parse_duration(t)?;
    }
    if let Some(m) = &args.thread_mgt {
        cfg.thread_mgt = config::parse_thread_mgt(m)?;
    }
    if let Some(o) = args.out {
        cfg.out = o;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let cfg = build_config(args)?;
    let records = run_matrix(&cfg)?;
    let cells = emit_all(&records, &cfg.out)?;
    print!("{}", summary_table(&cells));
    println!("wrote {}", cfg.out.display());
    Ok(())
}

fn parse_cell(s: &str) -> Result<(i32, i32), BenchError> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| BenchError::Config(format!("expected X,Y, got `{s}`")))?;
    let p = |v: &str| {
        v.trim()
            .parse::<i32>()
            .map_err(|_| BenchError::Config(format!("bad coordinate `{v}`")))
    };
    Ok((p(x)?, p(y)?))
}

fn oracle(args: OracleArgs) -> Result<(), Failure> {
    let map = load_map(&args.map).map_err(BenchError::from)?;
    let (sx, sy) = parse_cell(&args.start)?;
    let (gx, gy) = parse_cell(&args.goal)?;
    let prims = PrimitiveSet::parse(&args.primitives)?.primitives();
    let space = GridDomain::new(map, prims, args.headings, GoalRegion::cell(gx, gy)).map_err(BenchError::from)?;
    let start = GridState::new(sx, sy, 0);
    if !space.is_free(&start) {
        return Err(Failure::Usage(format!("start {sx},{sy} is blocked or off the map")));
    }
    let res = oracle_shortest_paths(&space, &start, false).map_err(BenchError::from)?;
    match res.optimal_cost {
        Some(c) => println!("{c}"),
        None => println!("unreachable"),
    }
    Ok(())
}

fn verify(instances: usize, seed: u64) -> Result<(), Failure> {
    let checks = run_checks(instances, seed).map_err(BenchError::from)?;
    let mut ok = true;
    for c in &checks {
        println!("{} {} ({} runs)", if c.passed() { "PASS" } else { "FAIL" }, c.name, c.runs);
        for f in &c.failures {
            println!("    {f}");
        }
        ok &= c.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
