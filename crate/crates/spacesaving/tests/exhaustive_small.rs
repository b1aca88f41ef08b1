//! Exhaustive small-instance oracles: every stream over a 4-symbol universe
//! up to a modest length, checked item by item against exact counts. The
//! acceptance suite in the benchmark crate runs the full-size sweeps; these
//! shorter ones keep library development honest at a few seconds.

use spacesaving::{combine, prune_threshold, StreamSummary};

const UNIVERSE: u64 = 4;

fn check_sequential(s: &StreamSummary, counts: &[u64; 4], n: u64, k: usize) {
    let sum: u64 = s.iter().map(|c| c.freq).sum();
    assert_eq!(sum, n, "conservation broken at n={n} k={k}");
    for item in 0..UNIVERSE {
        let f = counts[item as usize];
        match s.estimate(item) {
            Some(est) => {
                assert!(est >= f, "underestimate at n={n} k={k} item={item}");
                assert!(est - f <= n / k as u64, "slack bound at n={n} k={k} item={item}");
            }
            None => assert!(
                f <= s.min_frequency(),
                "unmonitored item {item} occurred {f} times at n={n} k={k}"
            ),
        }
        if f > n / k as u64 {
            assert!(s.estimate(item).is_some(), "frequent item {item} missing at n={n} k={k}");
        }
    }
}

// Depth-first over all streams of length <= max_len, reusing the prefix
// summary by cloning at each branch.
fn explore_sequential(s: &StreamSummary, counts: &[u64; 4], n: u64, k: usize, max_len: u64) {
    check_sequential(s, counts, n, k);
    if n == max_len {
        return;
    }
    for sym in 0..UNIVERSE {
        let mut child = s.clone();
        child.update(sym);
        let mut child_counts = *counts;
        child_counts[sym as usize] += 1;
        explore_sequential(&child, &child_counts, n + 1, k, max_len);
    }
}

#[test]
fn sequential_oracle_holds_exhaustively() {
    for k in 1..=3 {
        let root = StreamSummary::new(k).unwrap();
        explore_sequential(&root, &[0; 4], 0, k, 8);
    }
}

fn check_merged(
    s1: &StreamSummary,
    s2: &StreamSummary,
    c1: &[u64; 4],
    c2: &[u64; 4],
    k: usize,
) {
    let n = s1.processed() + s2.processed();
    let merged = combine(s1, s2, k).expect("capacities match");
    assert!(merged.len() <= k);
    for c in merged.iter() {
        let f = c1[c.item as usize] + c2[c.item as usize];
        assert!(c.freq >= f, "merged underestimate: item {} at n={n} k={k}", c.item);
    }
    let kept = prune_threshold(&merged, n, k);
    for item in 0..UNIVERSE {
        let f = c1[item as usize] + c2[item as usize];
        if f > n / k as u64 {
            assert!(
                kept.iter().any(|c| c.item == item),
                "frequent item {item} lost in merge at n={n} k={k}"
            );
        }
    }
}

fn explore_second(
    s1: &StreamSummary,
    c1: &[u64; 4],
    s2: &StreamSummary,
    c2: &[u64; 4],
    budget: u64,
    k: usize,
) {
    check_merged(s1, s2, c1, c2, k);
    if budget == 0 {
        return;
    }
    for sym in 0..UNIVERSE {
        let mut child = s2.clone();
        child.update(sym);
        let mut child_counts = *c2;
        child_counts[sym as usize] += 1;
        explore_second(s1, c1, &child, &child_counts, budget - 1, k);
    }
}

fn explore_first(s1: &StreamSummary, c1: &[u64; 4], max_total: u64, k: usize) {
    let empty = StreamSummary::new(k).unwrap();
    explore_second(s1, c1, &empty, &[0; 4], max_total - s1.processed(), k);
    if s1.processed() == max_total {
        return;
    }
    for sym in 0..UNIVERSE {
        let mut child = s1.clone();
        child.update(sym);
        let mut child_counts = *c1;
        child_counts[sym as usize] += 1;
        explore_first(&child, &child_counts, max_total, k);
    }
}

#[test]
fn merge_oracle_holds_exhaustively() {
    // Every (first, second) stream pair with total length <= 8 — equivalent
    // to every split point of every stream of that total length.
    for k in 2..=3 {
        let root = StreamSummary::new(k).unwrap();
        explore_first(&root, &[0; 4], 8, k);
    }
}
