//! Parallel execution: a shared job queue for the relation-table stage and
//! work-stealing depth queues for the enumeration stage.
//!
//! Each enumeration worker owns a queue of per-depth subqueues. Locally it
//! pops from the deepest nonempty subqueue, keeping memory close to a
//! depth-first traversal; a thief takes from the shallowest, grabbing the
//! largest remaining subtree. Termination is a global count of tasks that
//! have been enqueued but not yet fully expanded.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, PoisonError};
use std::time::Instant;

use crate::cones::{intersects, Fan};
use crate::enumeration::{
    choose_first_fan, choose_next_fan, expand, root_task, ConeSink, EnumerationStats, OutputCone,
    Task,
};
use crate::relation::{FanTables, TableLayout};
use crate::{Error, Result};

/// One worker's queue: one buffer per depth. Tasks at depth `d` live in
/// subqueue `d`; the owner pushes and pops at the back of the highest
/// nonempty subqueue, thieves take from the front of the lowest.
pub struct DepthQueue {
    subqueues: Mutex<Vec<VecDeque<Task>>>,
}

fn lock_queues(q: &Mutex<Vec<VecDeque<Task>>>) -> std::sync::MutexGuard<'_, Vec<VecDeque<Task>>> {
    // A poisoning panic is reported through the abort flag; the queue
    // itself is never left mid-mutation.
    q.lock().unwrap_or_else(PoisonError::into_inner)
}

fn nonempty_depths(subqueues: &[VecDeque<Task>]) -> Vec<usize> {
    subqueues
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_empty())
        .map(|(i, _)| i + 1)
        .collect()
}

impl DepthQueue {
    /// `levels` is the deepest storable depth: tasks exist at depths
    /// `1..=fan_count-1`, full-depth intersections are emitted instead.
    pub fn new(levels: usize) -> DepthQueue {
        DepthQueue {
            subqueues: Mutex::new(vec![VecDeque::new(); levels]),
        }
    }

    pub fn push(&self, task: Task) {
        let depth = task.depth();
        let mut qs = lock_queues(&self.subqueues);
        assert!(depth >= 1 && depth <= qs.len(), "task depth {depth} out of range");
        qs[depth - 1].push_back(task);
    }

    /// Owner's pop: back of the highest nonempty subqueue. With `snapshot`
    /// also reports which depths were nonempty at that moment.
    pub fn pop_local(&self, snapshot: bool) -> Option<(Task, Option<Vec<usize>>)> {
        let mut qs = lock_queues(&self.subqueues);
        let snap = snapshot.then(|| nonempty_depths(&qs));
        let task = qs.iter_mut().rev().find_map(VecDeque::pop_back)?;
        Some((task, snap))
    }

    /// Thief's take: front of the lowest nonempty subqueue.
    pub fn steal(&self, snapshot: bool) -> Option<(Task, Option<Vec<usize>>)> {
        let mut qs = lock_queues(&self.subqueues);
        let snap = snapshot.then(|| nonempty_depths(&qs));
        let task = qs.iter_mut().find_map(VecDeque::pop_front)?;
        Some((task, snap))
    }
}

/// Victim scan order for a thief: the next worker cyclically, then the
/// rest, never itself.
pub fn victim_order(worker: usize, count: usize) -> Vec<usize> {
    (1..count).map(|k| (worker + k) % count).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceAction {
    Pop,
    Steal { victim: usize },
    Emit,
}

/// One scheduling event, recorded when tracing is on.
#[derive(Clone, Debug)]
pub struct TraceEvent {
    pub worker: usize,
    pub action: TraceAction,
    pub depth: usize,
    pub timestamp_micros: u64,
    /// Nonempty depths of the queue a task was taken from, at the moment
    /// of removal; empty for emissions.
    pub queue_depths: Vec<usize>,
    /// For steals: the victims scanned and found empty before the hit.
    pub scanned: Vec<usize>,
}

/// Renders events one per line: `worker action depth timestamp`.
pub fn format_trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for e in events {
        let action = match e.action {
            TraceAction::Pop => "pop",
            TraceAction::Steal { .. } => "steal",
            TraceAction::Emit => "emit",
        };
        writeln!(out, "{} {} {} {}", e.worker, action, e.depth, e.timestamp_micros)
            .expect("string writes cannot fail");
    }
    out
}

/// Forwards emissions to the shared sink and records per-worker events.
struct Recorder<'a> {
    worker: usize,
    inner: &'a dyn ConeSink,
    start: Instant,
    enabled: bool,
    events: Mutex<Vec<TraceEvent>>,
}

impl<'a> Recorder<'a> {
    fn new(worker: usize, inner: &'a dyn ConeSink, start: Instant, enabled: bool) -> Recorder<'a> {
        Recorder {
            worker,
            inner,
            start,
            enabled,
            events: Mutex::new(Vec::new()),
        }
    }

    fn record(&self, action: TraceAction, depth: usize, queue_depths: Vec<usize>, scanned: Vec<usize>) {
        if !self.enabled {
            return;
        }
        let timestamp_micros = self.start.elapsed().as_micros() as u64;
        self.events
            .lock()
            .unwrap_or_else(PoisonError::into_inner)
            .push(TraceEvent {
                worker: self.worker,
                action,
                depth,
                timestamp_micros,
                queue_depths,
                scanned,
            });
    }

    fn into_events(self) -> Vec<TraceEvent> {
        self.events.into_inner().unwrap_or_else(PoisonError::into_inner)
    }
}

impl ConeSink for Recorder<'_> {
    fn emit(&self, cone: OutputCone) {
        self.record(TraceAction::Emit, cone.lineage.len(), Vec::new(), Vec::new());
        self.inner.emit(cone);
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    match payload.downcast::<String>() {
        Ok(s) => *s,
        Err(p) => match p.downcast::<&'static str>() {
            Ok(s) => (*s).to_string(),
            Err(_) => "worker panicked with a non-string payload".to_string(),
        },
    }
}

struct Shared<'a> {
    fans: &'a [Fan],
    tables: Option<&'a FanTables>,
    queues: Vec<DepthQueue>,
    in_flight: AtomicUsize,
    abort: AtomicBool,
    failure: Mutex<Option<String>>,
}

fn worker_loop(
    w: usize,
    shared: &Shared<'_>,
    recorder: &Recorder<'_>,
    stats: &mut EnumerationStats,
) {
    let victims = victim_order(w, shared.queues.len());
    loop {
        if shared.abort.load(Ordering::SeqCst) {
            return;
        }
        let acquired = shared.queues[w]
            .pop_local(recorder.enabled)
            .map(|(t, s)| (t, TraceAction::Pop, s, Vec::new()))
            .or_else(|| {
                let mut scanned = Vec::new();
                victims.iter().find_map(|&v| {
                    match shared.queues[v].steal(recorder.enabled) {
                        Some((t, s)) => {
                            Some((t, TraceAction::Steal { victim: v }, s, scanned.clone()))
                        }
                        None => {
                            scanned.push(v);
                            None
                        }
                    }
                })
            });
        let Some((task, action, snapshot, scanned)) = acquired else {
            if shared.in_flight.load(Ordering::SeqCst) == 0 {
                return;
            }
            std::thread::yield_now();
            continue;
        };
        recorder.record(action, task.depth(), snapshot.unwrap_or_default(), scanned);
        let next = choose_next_fan(&task, shared.fans);
        let children = expand(&task, next, shared.fans, shared.tables, recorder, stats);
        for child in children {
            shared.in_flight.fetch_add(1, Ordering::SeqCst);
            shared.queues[w].push(child);
        }
        shared.in_flight.fetch_sub(1, Ordering::SeqCst);
    }
}

/// Work-stealing enumeration across `workers` threads. Seeds the queues
/// round-robin with the starting fan's cones, then lets every worker run
/// pop-expand-push with stealing until no task is queued or running.
/// A worker panic aborts the whole run.
pub fn run_enumeration_stage(
    fans: &[Fan],
    tables: Option<&FanTables>,
    workers: usize,
    sink: &dyn ConeSink,
    record_trace: bool,
) -> Result<(EnumerationStats, Vec<TraceEvent>)> {
    assert!(workers >= 1, "need at least one worker");
    let start = Instant::now();
    let mut stats = EnumerationStats::default();
    let mut events = Vec::new();

    let seed_recorder = Recorder::new(0, sink, start, record_trace);
    let root = root_task(fans, tables);
    let first = choose_first_fan(fans);
    let seeds = expand(&root, first, fans, tables, &seed_recorder, &mut stats);
    events.extend(seed_recorder.into_events());

    let shared = Shared {
        fans,
        tables,
        queues: (0..workers)
            .map(|_| DepthQueue::new(fans.len().saturating_sub(1)))
            .collect(),
        in_flight: AtomicUsize::new(seeds.len()),
        abort: AtomicBool::new(false),
        failure: Mutex::new(None),
    };
    for (k, task) in seeds.into_iter().enumerate() {
        shared.queues[k % workers].push(task);
    }

    let per_worker: Vec<(EnumerationStats, Vec<TraceEvent>)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let shared = &shared;
                s.spawn(move || {
                    let recorder = Recorder::new(w, sink, start, record_trace);
                    let mut stats = EnumerationStats::default();
                    let outcome = catch_unwind(AssertUnwindSafe(|| {
                        worker_loop(w, shared, &recorder, &mut stats)
                    }));
                    if let Err(payload) = outcome {
                        let mut slot = shared
                            .failure
                            .lock()
                            .unwrap_or_else(PoisonError::into_inner);
                        slot.get_or_insert(panic_message(payload));
                        shared.abort.store(true, Ordering::SeqCst);
                    }
                    (stats, recorder.into_events())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker shell does not panic"))
            .collect()
    });

    if let Some(msg) = shared
        .failure
        .lock()
        .unwrap_or_else(PoisonError::into_inner)
        .take()
    {
        return Err(Error::WorkerPanic(msg));
    }
    for (s, e) in per_worker {
        stats.merge(&s);
        events.extend(e);
    }
    events.sort_by_key(|e| e.timestamp_micros);
    Ok((stats, events))
}

/// The ordered cross-fan pairs of the table stage: one job per direction,
/// so every job writes bits only for its first (owning) cone.
pub fn table_jobs(fans: &[Fan]) -> Vec<((usize, usize), (usize, usize))> {
    let mut jobs = Vec::new();
    for i in 0..fans.len() {
        for j in 0..fans.len() {
            if i == j {
                continue;
            }
            for ci in 0..fans[i].len() {
                for cj in 0..fans[j].len() {
                    jobs.push(((i, ci), (j, cj)));
                }
            }
        }
    }
    jobs
}

/// Fill the relation tables with `workers` threads popping one shared job
/// list. Each job is one ordered pair; hits are merged into the tables by
/// the calling thread, so no two writers ever share a word.
pub fn run_table_stage(fans: &[Fan], workers: usize) -> FanTables {
    assert!(workers >= 1, "need at least one worker");
    let sizes: Vec<usize> = fans.iter().map(Fan::len).collect();
    let jobs = table_jobs(fans);
    let cursor = AtomicUsize::new(0);
    let mut tables = FanTables::empty(Arc::new(TableLayout::new(&sizes)));
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let jobs = &jobs;
                let cursor = &cursor;
                s.spawn(move || {
                    let mut hits = Vec::new();
                    loop {
                        let k = cursor.fetch_add(1, Ordering::Relaxed);
                        let Some(&(owner, other)) = jobs.get(k) else {
                            break;
                        };
                        let a = &fans[owner.0].cones()[owner.1];
                        let b = &fans[other.0].cones()[other.1];
                        if intersects(a, b) {
                            hits.push((owner, other));
                        }
                    }
                    hits
                })
            })
            .collect();
        for h in handles {
            for (owner, other) in h.join().expect("table worker panicked") {
                tables.set_bit(owner, other);
            }
        }
    });
    tables
}
