//! Execution mode registry. Each mode is a named strategy over the same
//! engine surface; configs and the CLI select one by name ("flat" or
//! "hybrid"), so new decompositions can be added without touching callers.

use crate::engine::{run_hybrid, run_parallel, RunConfig, RunOutput};
use crate::error::Error;
use crate::summary::Item;

/// Parameters every mode understands. `processes` only matters to two-level
/// modes: hybrid runs as (processes) x (workers / processes).
#[derive(Debug, Clone, Copy)]
pub struct ModeParams {
    pub capacity: usize,
    pub workers: usize,
    pub processes: usize,
}

pub trait ExecutionMode: Sync {
    fn name(&self) -> &'static str;
    fn run(&self, stream: &[Item], params: &ModeParams) -> Result<RunOutput, Error>;
}

struct Flat;

impl ExecutionMode for Flat {
    fn name(&self) -> &'static str {
        "flat"
    }

    fn run(&self, stream: &[Item], params: &ModeParams) -> Result<RunOutput, Error> {
        run_parallel(stream, &RunConfig::flat(params.capacity, params.workers))
    }
}

struct Hybrid;

impl ExecutionMode for Hybrid {
    fn name(&self) -> &'static str {
        "hybrid"
    }

    fn run(&self, stream: &[Item], params: &ModeParams) -> Result<RunOutput, Error> {
        // A single worker degenerates to one process with one thread.
        let processes = if params.workers == 1 { 1 } else { params.processes };
        if processes == 0 || !params.workers.is_multiple_of(processes) {
            return Err(Error::InvalidHybridShape {
                processes,
                threads: params.workers.checked_div(processes).unwrap_or(0),
                workers: params.workers,
            });
        }
        let threads = params.workers / processes;
        run_hybrid(stream, &RunConfig::hybrid(params.capacity, processes, threads))
    }
}

static MODES: &[&dyn ExecutionMode] = &[&Flat, &Hybrid];

pub fn lookup(name: &str) -> Option<&'static dyn ExecutionMode> {
    MODES.iter().copied().find(|m| m.name() == name)
}

pub fn names() -> Vec<&'static str> {
    MODES.iter().map(|m| m.name()).collect()
}
