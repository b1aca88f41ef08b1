//! The engine fixes one reduction tree, but the no-false-negative guarantee
//! must not depend on that choice: here every binary tree shape over up to 4
//! rank-ordered worker summaries is reduced and checked for full recall.

use spacesaving::evaluate::ExactCounts;
use spacesaving::{combine, decompose, prune_threshold, StreamSummary};

fn build(k: usize, stream: &[u64]) -> StreamSummary {
    let mut s = StreamSummary::new(k).unwrap();
    for &x in stream {
        s.update(x);
    }
    s
}

// All full binary trees over leaves[lo..hi), returned as reduced summaries.
fn reductions(leaves: &[StreamSummary], lo: usize, hi: usize, k: usize) -> Vec<StreamSummary> {
    if hi - lo == 1 {
        return vec![leaves[lo].clone()];
    }
    let mut out = Vec::new();
    for mid in lo + 1..hi {
        for left in reductions(leaves, lo, mid, k) {
            for right in reductions(leaves, mid, hi, k) {
                out.push(combine(&left, &right, k).unwrap());
            }
        }
    }
    out
}

// Full binary trees with n leaves: the Catalan numbers.
const SHAPES: [usize; 5] = [0, 1, 1, 2, 5];

#[test]
fn every_tree_shape_preserves_recall() {
    // 60 items, universe 5: items 1 (f=25) and 2 (f=21) exceed 60/3.
    let counts = [(1u64, 25usize), (2, 21), (3, 8), (4, 4), (5, 2)];
    let mut stream = Vec::with_capacity(60);
    for round in 0..25 {
        for &(item, f) in &counts {
            if round < f {
                stream.push(item);
            }
        }
    }
    let truth = ExactCounts::from_stream(&stream);
    let k = 3;
    let frequent = truth.frequent_items(k);
    assert_eq!(frequent, vec![1, 2]);

    for (workers, &shapes) in SHAPES.iter().enumerate().skip(1) {
        let decomp = decompose(stream.len(), workers).unwrap();
        let leaves: Vec<StreamSummary> = (0..workers)
            .map(|r| build(k, &stream[decomp.block(r)]))
            .collect();
        let roots = reductions(&leaves, 0, workers, k);
        assert_eq!(roots.len(), shapes, "shape count for {workers} leaves");
        for (shape, root) in roots.iter().enumerate() {
            let kept = prune_threshold(root, stream.len() as u64, k);
            for &item in &frequent {
                assert!(
                    kept.iter().any(|c| c.item == item),
                    "workers={workers} shape={shape}: item {item} lost"
                );
            }
        }
    }
}
