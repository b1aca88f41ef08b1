//! Grid execution: expand stanzas into cells, generate each distinct stream
//! once, measure a workers=1 baseline per (n, k, rho, seed), then time every
//! cell and score it against exact counts.
//!
//! Stream generation, exact counting and all I/O happen outside the timed
//! region; cells run one at a time so they never contend for cores. Each
//! cell is repeated `reps` times and the repetition with the median wall
//! time supplies the reported (wall, compute, overhead) triple, keeping the
//! three numbers consistent with each other.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use anyhow::{bail, Context, Result};
use spacesaving::datagen::{generate_zipf, ZipfSpec};
use spacesaving::evaluate::{evaluate, AccuracyReport, ExactCounts};
use spacesaving::mode::{lookup, ModeParams};
use spacesaving::Counter;

use crate::grid::GridExperiment;

#[derive(Debug, Clone, PartialEq)]
pub struct CellConfig {
    pub n: u64,
    pub k: usize,
    pub rho: f64,
    pub universe: u64,
    pub seed: u64,
    pub workers: usize,
    pub mode: String,
    pub processes: usize,
    pub reps: usize,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: CellConfig,
    pub wall_s: f64,
    pub compute_s: f64,
    pub overhead_s: f64,
    /// T1 / Tp against the workers=1 baseline; exactly 1.0 for that baseline.
    pub speedup: f64,
    /// NaN when the measurement was degenerate (zero compute time).
    pub frac_overhead: f64,
    pub accuracy: AccuracyReport,
    /// Root candidates in rank order, the serialized list for replay checks.
    pub candidates: Vec<Counter>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GridOptions {
    pub seed_override: Option<u64>,
    pub reps_override: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_REPS: usize = 3;

/// (wall − compute_max) / compute_max, clamped at 0 for timer jitter.
pub fn fractional_overhead(wall_s: f64, compute_max_s: f64) -> Result<f64> {
    if compute_max_s <= 0.0 {
        bail!("undefined measurement: compute_max must be positive, got {compute_max_s}");
    }
    Ok(((wall_s - compute_max_s) / compute_max_s).max(0.0))
}

fn expand(experiments: &[GridExperiment], opts: &GridOptions) -> Vec<CellConfig> {
    let mut cells = Vec::new();
    for exp in experiments {
        let seed = opts.seed_override.or(exp.seed).unwrap_or(DEFAULT_SEED);
        let reps = opts.reps_override.or(exp.reps).unwrap_or(DEFAULT_REPS).max(1);
        for &n in &exp.n {
            for &k in &exp.k {
                for &rho in &exp.rho {
                    for &workers in &exp.workers {
                        for mode in &exp.mode {
                            cells.push(CellConfig {
                                n,
                                k,
                                rho,
                                universe: exp.universe,
                                seed,
                                workers,
                                mode: mode.clone(),
                                processes: exp.processes,
                                reps,
                            });
                        }
                    }
                }
            }
        }
    }
    cells
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct StreamKey {
    n: u64,
    universe: u64,
    rho_bits: u64,
    seed: u64,
}

impl StreamKey {
    fn of(cell: &CellConfig) -> Self {
        Self {
            n: cell.n,
            universe: cell.universe,
            rho_bits: cell.rho.to_bits(),
            seed: cell.seed,
        }
    }
}

fn available_memory_bytes() -> Option<u64> {
    let meminfo = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = meminfo.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

struct Measurement {
    wall_s: f64,
    compute_s: f64,
    candidates: Vec<Counter>,
}

// Repeat the cell and keep the median-wall repetition's timing.
fn measure(stream: &[u64], cell: &CellConfig) -> Result<Measurement> {
    let mode = lookup(&cell.mode)
        .with_context(|| format!("unknown execution mode {:?}", cell.mode))?;
    let params = ModeParams {
        capacity: cell.k,
        workers: cell.workers,
        processes: cell.processes,
    };
    let mut timings = Vec::with_capacity(cell.reps);
    let mut candidates = None;
    for _ in 0..cell.reps {
        let out = mode.run(stream, &params)?;
        timings.push((out.timing.wall.as_secs_f64(), out.timing.compute_max().as_secs_f64()));
        // Deterministic engine: every repetition reports the same list.
        candidates.get_or_insert(out.candidates);
    }
    timings.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (wall_s, compute_s) = timings[timings.len() / 2];
    Ok(Measurement { wall_s, compute_s, candidates: candidates.expect("reps >= 1") })
}

struct Baseline {
    wall_s: f64,
    compute_s: f64,
    accuracy: AccuracyReport,
    candidates: Vec<Counter>,
}

fn finish_cell(
    cell: CellConfig,
    wall_s: f64,
    compute_s: f64,
    speedup: f64,
    accuracy: AccuracyReport,
    candidates: Vec<Counter>,
    log: &mut impl FnMut(&str),
) -> CellResult {
    let overhead_s = (wall_s - compute_s).max(0.0);
    let frac_overhead = match fractional_overhead(wall_s, compute_s) {
        Ok(v) => v,
        Err(e) => {
            log(&format!(
                "cell n={} k={} rho={} workers={} mode={}: {e}; reporting frac_overhead as NaN",
                cell.n, cell.k, cell.rho, cell.workers, cell.mode
            ));
            f64::NAN
        }
    };
    CellResult {
        cell,
        wall_s,
        compute_s,
        overhead_s,
        speedup,
        frac_overhead,
        accuracy,
        candidates,
    }
}

/// Run every cell of `experiments`. Unsatisfiable cells are skipped with a
/// line through `log`, never silently. Results come back sorted by
/// (n, k, rho, workers, mode, seed).
pub fn run_grid(
    experiments: &[GridExperiment],
    opts: &GridOptions,
    mut log: impl FnMut(&str),
) -> Result<Vec<CellResult>> {
    let cells = expand(experiments, opts);

    // Group cells by the stream they run on so each stream is generated and
    // exactly counted once, and only one stream is resident at a time.
    let mut order: Vec<StreamKey> = Vec::new();
    let mut groups: HashMap<StreamKey, Vec<CellConfig>> = HashMap::new();
    for cell in cells {
        let key = StreamKey::of(&cell);
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(cell);
    }

    let mut results = Vec::new();
    for key in order {
        let group = groups.remove(&key).expect("group exists");
        let rho = f64::from_bits(key.rho_bits);

        // Stream + exact counts + summaries, with headroom.
        let required = key.n.saturating_mul(9).saturating_add(key.universe.saturating_mul(32));
        if let Some(available) = available_memory_bytes() {
            if required > available {
                log(&format!(
                    "skipping {} cell(s) at n={} rho={} seed={}: needs ~{} MiB, {} MiB available",
                    group.len(),
                    key.n,
                    rho,
                    key.seed,
                    required >> 20,
                    available >> 20
                ));
                continue;
            }
        }

        let spec = ZipfSpec { universe: key.universe, skew: rho, seed: key.seed, length: key.n };
        let stream = generate_zipf(&spec).context("stream generation")?;
        let truth = ExactCounts::from_stream(&stream);

        let mut baselines: HashMap<usize, Baseline> = HashMap::new();
        for cell in group {
            if let Entry::Vacant(slot) = baselines.entry(cell.k) {
                let baseline_cell = CellConfig {
                    workers: 1,
                    mode: "flat".to_string(),
                    ..cell.clone()
                };
                let m = measure(&stream, &baseline_cell)?;
                let accuracy = evaluate(&m.candidates, &truth, cell.k)?;
                slot.insert(Baseline {
                    wall_s: m.wall_s,
                    compute_s: m.compute_s,
                    accuracy,
                    candidates: m.candidates,
                });
            }
            let baseline = &baselines[&cell.k];

            // workers=1 cells are the baseline by definition, in either mode:
            // one process with one thread is the same single pass.
            let result = if cell.workers == 1 {
                finish_cell(
                    cell,
                    baseline.wall_s,
                    baseline.compute_s,
                    1.0,
                    baseline.accuracy.clone(),
                    baseline.candidates.clone(),
                    &mut log,
                )
            } else {
                let m = measure(&stream, &cell)?;
                let accuracy = evaluate(&m.candidates, &truth, cell.k)?;
                let speedup = baseline.wall_s / m.wall_s;
                finish_cell(cell, m.wall_s, m.compute_s, speedup, accuracy, m.candidates, &mut log)
            };
            results.push(result);
        }
    }

    results.sort_by(|a, b| {
        (a.cell.n, a.cell.k)
            .cmp(&(b.cell.n, b.cell.k))
            .then_with(|| a.cell.rho.total_cmp(&b.cell.rho))
            .then_with(|| a.cell.workers.cmp(&b.cell.workers))
            .then_with(|| a.cell.mode.cmp(&b.cell.mode))
            .then_with(|| a.cell.seed.cmp(&b.cell.seed))
    });
    Ok(results)
}
