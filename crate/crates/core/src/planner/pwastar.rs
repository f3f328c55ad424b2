use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use crossbeam_channel::{Receiver, Sender, TryRecvError};

use super::pool::panic_message;
use super::{astar, evaluate_counted, PlannerConfig, SearchResult, ThreadManagement};
use crate::error::SearchError;
use crate::space::{SearchSpace, Transition};

type Reply<S> = (usize, Result<Option<Transition<S>>, String>);

/// PwA*: wA* order, with the edges of each expansion evaluated in parallel
/// by up to `min(N_t, branching)` workers.
pub(super) fn run<Sp: SearchSpace>(
    space: &Sp,
    start: &Sp::State,
    config: &PlannerConfig,
) -> Result<SearchResult<Sp::State>, SearchError> {
    let evals = AtomicU64::new(0);
    if config.num_threads == 1 {
        let mut res = astar::search(space, start, config, &mut |key, n| {
            Ok((0..n).map(|a| evaluate_counted(space, key, a, &evals)).collect())
        })?;
        res.stats.edges_evaluated = evals.load(Ordering::Relaxed);
        return Ok(res);
    }
    let spin = config.busy_wait || config.thread_mgt == ThreadManagement::PreallocatedPool;
    let (job_tx, job_rx) = crossbeam_channel::unbounded::<(usize, Sp::State)>();
    let (reply_tx, reply_rx) = crossbeam_channel::unbounded::<Reply<Sp::State>>();
    let mut spawned = 0;

    let result = thread::scope(|scope| {
        let evals = &evals;
        let spawn = || {
            let jobs = job_rx.clone();
            let replies = reply_tx.clone();
            scope.spawn(move || worker(space, jobs, replies, evals, spin));
        };
        if config.thread_mgt == ThreadManagement::PreallocatedPool {
            while spawned < config.num_threads {
                spawn();
                spawned += 1;
            }
        }
        let res = astar::search(space, start, config, &mut |key, n| {
            while spawned < config.num_threads.min(n) {
                spawn();
                spawned += 1;
            }
            for a in 0..n {
                job_tx.send((a, key.clone())).expect("workers outlive the search");
            }
            let mut out: Vec<Option<Option<Transition<Sp::State>>>> = vec![None; n];
            let mut failure = None;
            for _ in 0..n {
                let (a, r) = reply_rx.recv().expect("workers outlive the search");
                match r {
                    Ok(t) => out[a] = Some(t),
                    Err(msg) => failure = Some(SearchError::WorkerPanicked(msg)),
                }
            }
            match failure {
                Some(e) => Err(e),
                None => Ok(out.into_iter().map(|t| t.flatten()).collect()),
            }
        });
        drop(job_tx);
        res
    });
    let mut res = result?;
    res.stats.edges_evaluated = evals.load(Ordering::Relaxed);
    res.stats.threads_spawned = spawned;
    Ok(res)
}

fn worker<Sp: SearchSpace>(
    space: &Sp,
    jobs: Receiver<(usize, Sp::State)>,
    replies: Sender<Reply<Sp::State>>,
    evals: &AtomicU64,
    spin: bool,
) {
    loop {
        let job = if spin {
            match jobs.try_recv() {
                Ok(job) => job,
                Err(TryRecvError::Empty) => {
                    std::hint::spin_loop();
                    thread::yield_now();
                    continue;
                }
                Err(TryRecvError::Disconnected) => return,
            }
        } else {
            match jobs.recv() {
                Ok(job) => job,
                Err(_) => return,
            }
        };
        let (a, key) = job;
        let r = catch_unwind(AssertUnwindSafe(|| evaluate_counted(space, &key, a, evals)))
            .map_err(|p| panic_message(p.as_ref()));
        if replies.send((a, r)).is_err() {
            return;
        }
    }
}
