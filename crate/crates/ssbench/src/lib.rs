//! Benchmark harness for the space-saving library: grid-file parsing,
//! experiment execution with repetition and baseline handling, and report
//! emission. The `bench` binary is a thin CLI over these modules.

pub mod experiment;
pub mod grid;
pub mod report;
