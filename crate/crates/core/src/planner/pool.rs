//! Coordinator and worker loop shared by the state- and edge-parallel
//! planners.

use std::any::Any;
use std::hash::Hash;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use crossbeam_channel::{Receiver, Sender, TryRecvError};

use super::{solved, AuditLog, Counters, Outcome, PlannerConfig, SearchResult, Selection, ThreadManagement};
use crate::error::SearchError;
use crate::independence::{select_safe, IndependenceParams, SelectScratch};
use crate::search::{ChangeCounter, SearchState, SharedSearchState, StateId};
use crate::space::SearchSpace;

/// Which workers exist and which of them are free. Lives under the search
/// lock.
#[derive(Debug)]
pub(super) struct WorkerBook {
    idle: Vec<usize>,
    spawned: usize,
    cap: usize,
}

pub(super) enum Claim {
    Idle(usize),
    Spawn(usize),
}

impl WorkerBook {
    pub fn new(cap: usize) -> Self {
        WorkerBook { idle: Vec::new(), spawned: 0, cap }
    }

    pub fn can_assign(&self) -> bool {
        !self.idle.is_empty() || self.spawned < self.cap
    }

    pub fn claim(&mut self) -> Option<Claim> {
        if let Some(i) = self.idle.pop() {
            Some(Claim::Idle(i))
        } else if self.spawned < self.cap {
            self.spawned += 1;
            Some(Claim::Spawn(self.spawned - 1))
        } else {
            None
        }
    }

    /// Creates a worker regardless of idle ones, while under the cap.
    pub fn claim_new(&mut self) -> Option<usize> {
        (self.spawned < self.cap).then(|| {
            self.spawned += 1;
            self.spawned - 1
        })
    }

    pub fn release(&mut self, worker: usize) {
        self.idle.push(worker);
    }

    pub fn spawned(&self) -> usize {
        self.spawned
    }
}

/// Receiving end of a worker's single-slot mailbox.
pub(super) struct Mailbox<J> {
    rx: Receiver<J>,
    spin: bool,
}

pub(super) fn mailbox<J>(spin: bool) -> (Sender<J>, Mailbox<J>) {
    let (tx, rx) = crossbeam_channel::bounded(1);
    (tx, Mailbox { rx, spin })
}

impl<J> Mailbox<J> {
    /// Next job, or `None` once the sender is gone.
    pub fn recv(&self) -> Option<J> {
        if !self.spin {
            return self.rx.recv().ok();
        }
        loop {
            match self.rx.try_recv() {
                Ok(job) => return Some(job),
                Err(TryRecvError::Disconnected) => return None,
                Err(TryRecvError::Empty) => {
                    std::hint::spin_loop();
                    thread::yield_now();
                }
            }
        }
    }
}

pub(super) fn panic_message(payload: &(dyn Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}

/// Everything behind the search lock.
pub(super) struct Inner<S, T> {
    pub st: SearchState<S, T>,
    pub book: WorkerBook,
    pub counters: Counters,
    pub audit: Option<AuditLog<S>>,
    pub failure: Option<SearchError>,
}

impl<S, T> ChangeCounter for Inner<S, T> {
    fn generation(&self) -> u64 {
        self.st.generation()
    }

    fn terminated(&self) -> bool {
        self.st.terminate
    }
}

/// What differs between the state- and edge-parallel planners.
pub(super) trait Scheme<Sp: SearchSpace>: Sync {
    type Item: Copy + Eq + Hash + std::fmt::Debug + Send;
    type Job: Send;
    type Output: Send;

    fn source(item: &Self::Item) -> StateId;

    fn is_dummy(_item: &Self::Item) -> bool {
        false
    }

    /// Registers the start state and puts it in OPEN.
    fn seed(&self, st: &mut SearchState<Sp::State, Self::Item>, start: &Sp::State) -> Result<(), SearchError>;

    /// Called under the lock for a selected non-goal item already removed
    /// from OPEN. Returns the job for a worker, or `None` when the item was
    /// handled in place.
    fn prepare(
        &self,
        inner: &mut Inner<Sp::State, Self::Item>,
        item: Self::Item,
    ) -> Result<Option<Self::Job>, SearchError>;

    /// Records the job's evaluations in the audit log. Runs under the lock
    /// for every finished job, including ones discarded after termination.
    fn audit(&self, log: &mut AuditLog<Sp::State>, job: &Self::Job);

    /// Runs on a worker without the lock.
    fn work(&self, job: &Self::Job) -> Self::Output;

    /// Runs on the worker under the lock.
    fn apply(
        &self,
        inner: &mut Inner<Sp::State, Self::Item>,
        job: Self::Job,
        out: Self::Output,
    ) -> Result<(), SearchError>;
}

/// Shared counters outside the lock.
#[derive(Default)]
pub(super) struct Meters {
    pub evaluations: AtomicU64,
    lock_wait_nanos: AtomicU64,
}

impl Meters {
    fn add_lock_wait(&self, d: Duration) {
        self.lock_wait_nanos.fetch_add(d.as_nanos() as u64, Ordering::Relaxed);
    }
}

/// Runs the coordinator loop with up to `config.num_threads` workers.
pub(super) fn run_parallel<Sp, Sc>(
    space: &Sp,
    scheme: &Sc,
    meters: &Meters,
    start: &Sp::State,
    config: &PlannerConfig,
    params: &IndependenceParams,
) -> Result<SearchResult<Sp::State>, SearchError>
where
    Sp: SearchSpace,
    Sc: Scheme<Sp>,
{
    let deadline = Instant::now() + config.time_limit;
    let mut st = SearchState::new();
    scheme.seed(&mut st, start)?;
    let shared = SharedSearchState::new(Inner {
        st,
        book: WorkerBook::new(config.num_threads),
        counters: Counters::default(),
        audit: config.audit.then(AuditLog::default),
        failure: None,
    });
    let spin = config.busy_wait || config.thread_mgt == ThreadManagement::PreallocatedPool;

    let outcome = thread::scope(|scope| {
        let mut senders: Vec<Sender<Sc::Job>> = Vec::new();
        let spawn_worker = |index: usize, senders: &mut Vec<Sender<Sc::Job>>| {
            let (tx, mb) = mailbox::<Sc::Job>(spin);
            senders.push(tx);
            let shared = &shared;
            scope.spawn(move || worker_loop(index, mb, shared, scheme, meters));
        };
        if config.thread_mgt == ThreadManagement::PreallocatedPool {
            let mut g = shared.lock();
            while let Some(i) = g.book.claim_new() {
                spawn_worker(i, &mut senders);
                g.book.release(i);
            }
        }

        let mut scratch = SelectScratch::new();
        let mut guard = shared.lock();
        let result = loop {
            if let Some(err) = guard.failure.take() {
                break Err(err);
            }
            if Instant::now() >= deadline {
                break Ok(None);
            }
            if guard.st.open.is_empty() && guard.st.be().is_empty() {
                break Ok(None);
            }
            let seen = guard.generation();
            let wait = |g| {
                if config.busy_wait {
                    shared.poll_for_change(g, seen, deadline)
                } else {
                    shared.wait_for_change(g, seen, deadline)
                }
            };
            if !guard.book.can_assign() {
                guard = wait(guard);
                continue;
            }
            let inner = &mut *guard;
            let picked = select_safe(
                &inner.st.open,
                Sc::source,
                inner.st.be(),
                &inner.st.registry,
                space,
                params,
                &mut scratch,
            );
            let Some(item) = picked else {
                guard = wait(guard);
                continue;
            };
            let src = Sc::source(&item);
            if let Some(log) = inner.audit.as_mut() {
                let rank = inner.st.open.iter().position(|(_, e)| *e == item).unwrap_or(0);
                log.selections.push(Selection {
                    state: inner.st.registry.key(src).clone(),
                    g: inner.st.registry.g(src),
                    dummy: Sc::is_dummy(&item),
                    rank,
                    be_len: inner.st.be().len(),
                });
            }
            if let Err(e) = inner.st.open_remove(&item) {
                break Err(e);
            }
            if space.is_goal(inner.st.registry.key(src)) {
                break Ok(Some(src));
            }
            let job = match scheme.prepare(inner, item) {
                Ok(Some(job)) => job,
                Ok(None) => continue,
                Err(e) => break Err(e),
            };
            match inner.book.claim() {
                Some(Claim::Idle(i)) => {
                    let _ = senders[i].send(job);
                }
                Some(Claim::Spawn(i)) => {
                    spawn_worker(i, &mut senders);
                    let _ = senders[i].send(job);
                }
                None => unreachable!("selection is gated on a free worker"),
            }
        };
        guard.st.terminate = true;
        guard.st.bump();
        let timed_out = matches!(result, Ok(None)) && !(guard.st.open.is_empty() && guard.st.be().is_empty());
        drop(guard);
        shared.notify();
        drop(senders);
        result.map(|goal| (goal, timed_out))
    });

    let mut inner = shared.into_inner();
    let mut res = match outcome {
        Err(e) => return Err(e),
        Ok((Some(goal), _)) => solved(&inner.st.registry, goal)?,
        Ok((None, true)) => SearchResult::unsolved(Outcome::Timeout),
        Ok((None, false)) => SearchResult::unsolved(Outcome::NoSolution),
    };
    if let Some(e) = inner.failure.take() {
        return Err(e);
    }
    inner.counters.fill(&mut res.stats);
    res.stats.edges_evaluated = meters.evaluations.load(Ordering::Relaxed);
    res.stats.threads_spawned = inner.book.spawned();
    res.stats.lock_wait_time = Duration::from_nanos(meters.lock_wait_nanos.load(Ordering::Relaxed));
    res.stats.be_size_at_exit = inner.st.be().len();
    res.audit = inner.audit.take();
    Ok(res)
}

fn worker_loop<Sp, Sc>(
    index: usize,
    mailbox: Mailbox<Sc::Job>,
    shared: &SharedSearchState<Inner<Sp::State, Sc::Item>>,
    scheme: &Sc,
    meters: &Meters,
) where
    Sp: SearchSpace,
    Sc: Scheme<Sp>,
{
    while let Some(job) = mailbox.recv() {
        let out = catch_unwind(AssertUnwindSafe(|| scheme.work(&job)));
        let t = Instant::now();
        let mut guard = shared.lock();
        meters.add_lock_wait(t.elapsed());
        match out {
            Err(payload) => {
                guard.failure = Some(SearchError::WorkerPanicked(panic_message(payload.as_ref())));
                guard.st.terminate = true;
                guard.st.bump();
                drop(guard);
                shared.notify();
                return;
            }
            Ok(out) => {
                if let Some(log) = guard.audit.as_mut() {
                    scheme.audit(log, &job);
                }
                if !guard.st.terminate {
                    if let Err(e) = scheme.apply(&mut guard, job, out) {
                        guard.failure.get_or_insert(e);
                    }
                }
            }
        }
        let stop = guard.st.terminate;
        guard.book.release(index);
        guard.st.bump();
        drop(guard);
        shared.notify();
        if stop {
            return;
        }
    }
}
