//! Merging two Space Saving summaries and thresholding the result.
//!
//! `combine` merges two summaries of equal capacity: an item monitored on
//! both sides gets the sum of its estimates, an item monitored on one side
//! gets its estimate plus the other side's slack — the most it could have
//! accumulated there without being monitored — and only the k largest
//! candidates survive. `prune_threshold` then drops everything below the
//! k-majority threshold ⌊n/k⌋ + 1; it is applied once, at the root of a
//! reduction, not per merge.
//!
//! The slack of a full summary is its minimum frequency. A summary with free
//! counters has never evicted, so an item absent from it truly never
//! occurred there and the slack is 0; anything larger can inflate never-seen
//! items past a genuine k-majority item and break the no-false-negative
//! guarantee (e.g. merging {0:1, 1:1} with the under-filled {2:3} at k=2).

use std::cmp::Ordering;

use crate::error::Error;
use crate::summary::{Counter, StreamSummary};

// Descending frequency, ties toward the smaller item id.
fn rank_order(a: &Counter, b: &Counter) -> Ordering {
    b.freq.cmp(&a.freq).then_with(|| a.item.cmp(&b.item))
}

// Upper bound on the frequency an absent item can have accumulated.
fn slack(s: &StreamSummary) -> u64 {
    if s.len() < s.capacity() {
        0
    } else {
        s.min_frequency()
    }
}

/// Merge `s1` and `s2`, both built with capacity `k`, into one summary
/// holding the k highest-ranked candidates. Ties at the capacity boundary
/// keep the smaller item ids. The result accounts for the items of both
/// inputs, but conservation of the frequency sum does not survive the added
/// slack.
pub fn combine(s1: &StreamSummary, s2: &StreamSummary, k: usize) -> Result<StreamSummary, Error> {
    if s1.capacity() != k || s2.capacity() != k {
        return Err(Error::IncompatibleSummaries {
            left: s1.capacity(),
            right: s2.capacity(),
            expected: k,
        });
    }
    let m1 = slack(s1);
    let m2 = slack(s2);
    // Item-major packed counters: numeric order is item order, so one sort
    // and a linear join replace a hash lookup per counter.
    let key = |c: Counter| (u128::from(c.item) << 64) | u128::from(c.freq);
    let split = |e: u128| Counter { item: (e >> 64) as u64, freq: e as u64 };
    let mut a: Vec<u128> = s1.iter().map(key).collect();
    let mut b: Vec<u128> = s2.iter().map(key).collect();
    a.sort_unstable();
    b.sort_unstable();

    let mut candidates: Vec<Counter> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let ca = split(a[i]);
        let cb = split(b[j]);
        match ca.item.cmp(&cb.item) {
            Ordering::Less => {
                candidates.push(Counter { item: ca.item, freq: ca.freq + m2 });
                i += 1;
            }
            Ordering::Greater => {
                candidates.push(Counter { item: cb.item, freq: cb.freq + m1 });
                j += 1;
            }
            Ordering::Equal => {
                candidates.push(Counter { item: ca.item, freq: ca.freq + cb.freq });
                i += 1;
                j += 1;
            }
        }
    }
    candidates.extend(a[i..].iter().map(|&e| {
        let c = split(e);
        Counter { item: c.item, freq: c.freq + m2 }
    }));
    candidates.extend(b[j..].iter().map(|&e| {
        let c = split(e);
        Counter { item: c.item, freq: c.freq + m1 }
    }));

    // Exact top-k cut without ordering the survivors; items are unique so
    // the rank order is total and the kept set is deterministic.
    if candidates.len() > k {
        candidates.select_nth_unstable_by(k - 1, rank_order);
        candidates.truncate(k);
    }
    Ok(StreamSummary::from_counters(
        k,
        &candidates,
        s1.processed() + s2.processed(),
    ))
}

/// Counters whose estimate reaches the k-majority threshold ⌊n/k⌋ + 1 for a
/// stream of length `n`, in rank order (descending frequency, ties by
/// ascending item id).
pub fn prune_threshold(summary: &StreamSummary, n: u64, k: usize) -> Vec<Counter> {
    if k == 0 {
        return Vec::new();
    }
    let threshold = n / k as u64 + 1;
    let mut kept: Vec<Counter> = summary.iter().filter(|c| c.freq >= threshold).collect();
    kept.sort_unstable_by(rank_order);
    kept
}
