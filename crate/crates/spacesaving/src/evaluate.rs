//! Ground-truth oracle and accuracy metrics: relative error, average
//! relative error, precision, recall.
//!
//! The true k-majority set is T = {x : f(x) ≥ ⌊n/k⌋ + 1}. ARE is emitted
//! over two populations — the reported items and the true frequent items —
//! because either reading of "measured frequencies" is defensible; reports
//! carry both.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::error::Error;
use crate::summary::{Counter, Item};

/// Exact frequencies of a fully materialized stream.
#[derive(Debug, Clone, Default)]
pub struct ExactCounts {
    counts: FxHashMap<Item, u64>,
    total: u64,
}

impl ExactCounts {
    pub fn from_stream(stream: &[Item]) -> Self {
        let mut counts = FxHashMap::default();
        for &x in stream {
            *counts.entry(x).or_insert(0) += 1;
        }
        Self { counts, total: stream.len() as u64 }
    }

    pub fn frequency(&self, item: Item) -> u64 {
        self.counts.get(&item).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// True k-majority items, ascending by id.
    pub fn frequent_items(&self, k: usize) -> Vec<Item> {
        if k == 0 {
            return Vec::new();
        }
        let threshold = self.total / k as u64 + 1;
        let mut items: Vec<Item> = self
            .counts
            .iter()
            .filter(|&(_, &f)| f >= threshold)
            .map(|(&x, _)| x)
            .collect();
        items.sort_unstable();
        items
    }
}

/// Δf = |f − f̂| / f. Undefined for an item that never occurred.
pub fn relative_error(true_freq: u64, estimate: u64) -> Result<f64, Error> {
    if true_freq == 0 {
        return Err(Error::UndefinedRelativeError);
    }
    Ok(true_freq.abs_diff(estimate) as f64 / true_freq as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
    /// The precision denominator was zero (nothing reported); the value is
    /// the conventional 1.0.
    pub precision_undefined: bool,
}

/// Precision = |reported ∩ T| / |reported| and recall = |reported ∩ T| / |T|
/// against the true k-majority set T. An empty report gives precision 1.0
/// (flagged); an empty T gives recall 1.0.
pub fn precision_recall(reported: &[Item], truth: &ExactCounts, k: usize) -> PrecisionRecall {
    let frequent = truth.frequent_items(k);
    let hits = reported.iter().filter(|&&x| frequent.binary_search(&x).is_ok()).count();
    let (precision, precision_undefined) = if reported.is_empty() {
        (1.0, true)
    } else {
        (hits as f64 / reported.len() as f64, false)
    };
    let recall = if frequent.is_empty() {
        1.0
    } else {
        hits as f64 / frequent.len() as f64
    };
    PrecisionRecall { precision, recall, precision_undefined }
}

/// Mean Δf over the estimates in `output`. Every output item must occur in
/// the stream; an empty output yields (0.0, flag).
pub fn average_relative_error(
    output: &[Counter],
    truth: &ExactCounts,
) -> Result<(f64, bool), Error> {
    if output.is_empty() {
        return Ok((0.0, true));
    }
    let mut sum = 0.0;
    for c in output {
        sum += relative_error(truth.frequency(c.item), c.freq)?;
    }
    Ok((sum / output.len() as f64, false))
}

/// One reported item: true frequency, estimate, relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub item: Item,
    pub freq: u64,
    pub estimate: u64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    /// Per reported item, in the candidate list's rank order.
    pub rows: Vec<ReportRow>,
    /// Mean Δf over the reported items.
    pub are_reported: f64,
    /// Mean Δf over the true k-majority items.
    pub are_frequent: f64,
    pub precision: f64,
    pub recall: f64,
    /// Nothing was reported; ARE(reported) and precision are conventional.
    pub reported_empty: bool,
}

impl AccuracyReport {
    /// CSV rows `item,f,f_hat,delta_f` plus a trailing summary line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("item,f,f_hat,delta_f\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.item, r.freq, r.estimate, r.delta).expect("string");
        }
        writeln!(
            out,
            "# summary are_reported={} are_frequent={} precision={} recall={}",
            self.are_reported, self.are_frequent, self.precision, self.recall
        )
        .expect("string");
        out
    }
}

/// Score a candidate list against the exact counts for parameter `k`.
pub fn evaluate(candidates: &[Counter], truth: &ExactCounts, k: usize) -> Result<AccuracyReport, Error> {
    let mut rows = Vec::with_capacity(candidates.len());
    for c in candidates {
        let freq = truth.frequency(c.item);
        rows.push(ReportRow {
            item: c.item,
            freq,
            estimate: c.freq,
            delta: relative_error(freq, c.freq)?,
        });
    }
    let (are_reported, reported_empty) = average_relative_error(candidates, truth)?;

    let frequent = truth.frequent_items(k);
    let estimates: FxHashMap<Item, u64> = candidates.iter().map(|c| (c.item, c.freq)).collect();
    let mut are_frequent = 0.0;
    if !frequent.is_empty() {
        for &x in &frequent {
            // A missed frequent item has no estimate; score it as 0.
            let est = estimates.get(&x).copied().unwrap_or(0);
            are_frequent += relative_error(truth.frequency(x), est)?;
        }
        are_frequent /= frequent.len() as f64;
    }

    let reported: Vec<Item> = candidates.iter().map(|c| c.item).collect();
    let pr = precision_recall(&reported, truth, k);
    Ok(AccuracyReport {
        rows,
        are_reported,
        are_frequent,
        precision: pr.precision,
        recall: pr.recall,
        reported_empty,
    })
}
