//! Mergeable Space Saving summaries for the k-majority (frequent items)
//! problem, with a data-parallel fork-join engine.
//!
//! The pipeline: decompose a stream into per-worker blocks, run sequential
//! Space Saving on each block, merge the worker summaries through a
//! deterministic reduction tree, and threshold-prune the root to get the
//! candidate frequent items. Every item occurring more than n/k times is
//! guaranteed to be reported, sequentially and after any reduction.
//!
//! Also here: seeded Zipfian workload generation, exact-counting oracles, and
//! the accuracy metrics (ARE, precision, recall) used by the benchmark CLI.

pub mod datagen;
pub mod engine;
pub mod error;
pub mod evaluate;
pub mod merge;
pub mod mode;
pub mod summary;

pub use engine::{decompose, run_hybrid, run_parallel, Decomposition, RunConfig, RunOutput, TimingBreakdown};
pub use error::Error;
pub use merge::{combine, prune_threshold};
pub use summary::{Counter, Item, StreamSummary};
