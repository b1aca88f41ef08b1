//! Data-parallel driver: block decomposition, one sequential Space Saving
//! pass per worker rank (ranks share OS threads when they outnumber the
//! host's cores), then a deterministic pairwise reduction of the worker
//! summaries and a single threshold prune at the root.
//!
//! The reduction tree is fixed — ranks pair as (0,1), (2,3), … with an odd
//! summary carried over, repeated until one summary remains — so the output
//! for a given (stream, config) never depends on thread scheduling. Timing is
//! split into per-worker compute, reduction, and wall time; overhead is
//! everything the slowest worker's compute does not explain.

use std::time::{Duration, Instant};

use crate::error::Error;
use crate::merge::{combine, prune_threshold};
use crate::summary::{Counter, Item, StreamSummary};

/// Block boundaries for `p` ranks over `n` items: rank r owns the inclusive
/// index range [⌊rn/p⌋, ⌊(r+1)n/p⌋ − 1]. Ranges tile the stream exactly;
/// when p > n some are empty (right < left, hence the signed bounds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    ranges: Vec<(i64, i64)>,
}

impl Decomposition {
    pub fn workers(&self) -> usize {
        self.ranges.len()
    }

    /// Inclusive (left, right) bounds per rank; right < left marks an empty
    /// block.
    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    /// Rank r's block as a half-open range, empty blocks normalized.
    pub fn block(&self, rank: usize) -> std::ops::Range<usize> {
        let (left, right) = self.ranges[rank];
        if right < left {
            left as usize..left as usize
        } else {
            left as usize..(right + 1) as usize
        }
    }
}

pub fn decompose(n: usize, workers: usize) -> Result<Decomposition, Error> {
    if workers == 0 {
        return Err(Error::InvalidWorkers);
    }
    let (n, p) = (n as u128, workers as u128);
    let ranges = (0..p)
        .map(|r| {
            let left = (r * n / p) as i64;
            let right = ((r + 1) * n / p) as i64 - 1;
            (left, right)
        })
        .collect();
    Ok(Decomposition { ranges })
}

/// Execution parameters for one engine run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    /// Counters per summary.
    pub capacity: usize,
    /// Total worker count p.
    pub workers: usize,
    /// Two-level (processes, threads_per_process) split; `None` for flat.
    pub hybrid: Option<(usize, usize)>,
}

impl RunConfig {
    pub fn flat(capacity: usize, workers: usize) -> Self {
        Self { capacity, workers, hybrid: None }
    }

    pub fn hybrid(capacity: usize, processes: usize, threads_per_process: usize) -> Self {
        Self {
            capacity,
            workers: processes * threads_per_process,
            hybrid: Some((processes, threads_per_process)),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.capacity == 0 {
            return Err(Error::InvalidCapacity);
        }
        if self.workers == 0 {
            return Err(Error::InvalidWorkers);
        }
        if let Some((p, t)) = self.hybrid {
            if p == 0 || t == 0 || p * t != self.workers {
                return Err(Error::InvalidHybridShape {
                    processes: p,
                    threads: t,
                    workers: self.workers,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TimingBreakdown {
    /// Elapsed time inside each worker's update loop, indexed by rank.
    pub worker_compute: Vec<Duration>,
    /// Reduction tree plus root prune, on the coordinating thread.
    pub reduction: Duration,
    pub wall: Duration,
}

impl TimingBreakdown {
    pub fn compute_max(&self) -> Duration {
        self.worker_compute.iter().copied().max().unwrap_or_default()
    }

    /// Wall time not explained by the slowest worker: spawn, join,
    /// synchronization, reduction.
    pub fn overhead(&self) -> Duration {
        self.wall.saturating_sub(self.compute_max())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Candidate k-majority items in rank order (frequency descending, ties
    /// by ascending id).
    pub candidates: Vec<Counter>,
    pub timing: TimingBreakdown,
}

struct WorkerResult {
    summary: StreamSummary,
    compute: Duration,
}

fn worker_pass(block: &[Item], capacity: usize) -> WorkerResult {
    let mut summary = StreamSummary::new(capacity).expect("validated capacity");
    let start = Instant::now();
    for &item in block {
        summary.update(item);
    }
    WorkerResult { summary, compute: start.elapsed() }
}

// Blocks run on at most `available_parallelism` scoped threads, each taking
// a contiguous run of ranks in rank order; spawning one thread per rank
// would only make surplus runnable threads timeslice against each other on
// the same cores. Results come back in rank order either way.
fn fork_join(stream: &[Item], blocks: &[std::ops::Range<usize>], capacity: usize) -> Vec<WorkerResult> {
    let lanes = std::thread::available_parallelism()
        .map_or(1, |p| p.get())
        .min(blocks.len());
    let mut results: Vec<Option<WorkerResult>> = Vec::new();
    results.resize_with(blocks.len(), || None);
    std::thread::scope(|scope| {
        let mut rest: &mut [Option<WorkerResult>] = &mut results;
        let mut next = 0usize;
        for lane in 0..lanes {
            // Same floor tiling as the blocks themselves.
            let end = (lane + 1) * blocks.len() / lanes;
            let (mine, tail) = rest.split_at_mut(end - next);
            rest = tail;
            let lane_blocks = &blocks[next..end];
            next = end;
            scope.spawn(move || {
                for (out, range) in mine.iter_mut().zip(lane_blocks) {
                    *out = Some(worker_pass(&stream[range.clone()], capacity));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every rank processed"))
        .collect()
}

// Pair (0,1), (2,3), …, carry an odd summary over, repeat to the root.
fn reduce_tree(mut level: Vec<StreamSummary>, k: usize) -> Result<StreamSummary, Error> {
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut nodes = level.into_iter();
        while let Some(left) = nodes.next() {
            match nodes.next() {
                Some(right) => next.push(combine(&left, &right, k)?),
                None => next.push(left),
            }
        }
        level = next;
    }
    Ok(level.into_iter().next().expect("at least one worker"))
}

/// Run the flat engine: decompose among `cfg.workers` ranks, one sequential
/// pass per block, reduce by rank, prune at the root.
pub fn run_parallel(stream: &[Item], cfg: &RunConfig) -> Result<RunOutput, Error> {
    cfg.validate()?;
    let decomp = decompose(stream.len(), cfg.workers)?;
    let blocks: Vec<_> = (0..cfg.workers).map(|r| decomp.block(r)).collect();

    let wall_start = Instant::now();
    let results = fork_join(stream, &blocks, cfg.capacity);
    let (summaries, worker_compute): (Vec<_>, Vec<_>) =
        results.into_iter().map(|r| (r.summary, r.compute)).unzip();

    let reduce_start = Instant::now();
    let root = reduce_tree(summaries, cfg.capacity)?;
    let candidates = prune_threshold(&root, stream.len() as u64, cfg.capacity);
    let reduction = reduce_start.elapsed();
    let wall = wall_start.elapsed();

    Ok(RunOutput {
        candidates,
        timing: TimingBreakdown { worker_compute, reduction, wall },
    })
}

/// Run the two-level engine: split among P simulated processes, split each
/// process block among its T threads, reduce each process's T summaries
/// first, then the P process summaries, then prune once at the root.
pub fn run_hybrid(stream: &[Item], cfg: &RunConfig) -> Result<RunOutput, Error> {
    cfg.validate()?;
    let (processes, threads) = match cfg.hybrid {
        Some(shape) => shape,
        None => {
            return Err(Error::InvalidHybridShape {
                processes: 0,
                threads: 0,
                workers: cfg.workers,
            })
        }
    };

    let outer = decompose(stream.len(), processes)?;
    // Global rank (p, t) owns the t-th sub-block of process p's block.
    let mut blocks = Vec::with_capacity(cfg.workers);
    for p in 0..processes {
        let base = outer.block(p);
        let inner = decompose(base.len(), threads)?;
        for t in 0..threads {
            let sub = inner.block(t);
            blocks.push(base.start + sub.start..base.start + sub.end);
        }
    }

    let wall_start = Instant::now();
    let results = fork_join(stream, &blocks, cfg.capacity);
    let (summaries, worker_compute): (Vec<_>, Vec<_>) =
        results.into_iter().map(|r| (r.summary, r.compute)).unzip();

    let reduce_start = Instant::now();
    let mut per_process = Vec::with_capacity(processes);
    for (p, chunk) in summaries.chunks(threads).enumerate() {
        debug_assert_eq!(chunk.len(), threads, "process {p} summary count");
        per_process.push(reduce_tree(chunk.to_vec(), cfg.capacity)?);
    }
    let root = reduce_tree(per_process, cfg.capacity)?;
    let candidates = prune_threshold(&root, stream.len() as u64, cfg.capacity);
    let reduction = reduce_start.elapsed();
    let wall = wall_start.elapsed();

    Ok(RunOutput {
        candidates,
        timing: TimingBreakdown { worker_compute, reduction, wall },
    })
}
