//! The sequential Space Saving summary: at most `capacity` counters, updated
//! one item at a time.
//!
//! A monitored item has its estimate incremented. An unmonitored item takes a
//! free counter with estimate 1 while any are left; once the summary is full
//! it replaces the minimum-frequency counter and inherits `min + 1`. Ties on
//! the minimum are broken toward the smallest item id, which makes every run
//! replayable.
//!
//! Internally a hash map locates each item's counter and a flat indexed
//! four-ary min-heap on (freq, item) keeps the eviction target at the root.
//! Increments mostly hit high-frequency counters already near the leaves, so
//! the common update costs O(1) sifting and the per-item cost stays nearly
//! independent of `capacity`; evictions descend through the crowd of
//! counters tied at the minimum, and the wide nodes halve that descent. The
//! map points at stable counter handles rather than heap slots, so sifting —
//! however deep — moves plain array entries and never rewrites the map; the
//! map itself is reseated on a fixed eviction cadence because sustained
//! remove/insert churn tombstones open-addressing tables faster than their
//! growth-triggered rehash reclaims them.

use rustc_hash::FxHashMap;

use crate::error::Error;

/// Opaque 64-bit item identity. Ordering is used only for tie-breaking.
pub type Item = u64;

/// A monitored item and its estimated frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counter {
    pub item: Item,
    pub freq: u64,
}

// Heap entries pack (freq, item) into one u128 whose numeric order is the
// lexicographic (freq, item) order; comparisons stay branch-free even in the
// long runs of equal frequencies near the minimum.
#[inline]
fn pack(freq: u64, item: Item) -> u128 {
    (u128::from(freq) << 64) | u128::from(item)
}

#[inline]
fn freq_of(entry: u128) -> u64 {
    (entry >> 64) as u64
}

#[inline]
fn item_of(entry: u128) -> Item {
    entry as u64
}

// Four children per node halve the descent depth of a binary layout.
const ARITY: usize = 4;

// Evictions between map reseats, per counter slot: amortized one rebuild
// insert per 64 evictions, far below the tombstone accretion horizon.
const RESEAT_PERIOD: u64 = 64;

#[derive(Debug, Clone)]
pub struct StreamSummary {
    capacity: usize,
    // item -> counter handle; an eviction hands the victim's handle to the
    // newcomer, so handles stay stable across heap moves.
    pos: FxHashMap<Item, u32>,
    until_reseat: u64,
    // handle -> current heap slot.
    slot: Vec<u32>,
    // heap slot -> handle, parallel to `heap`.
    handle: Vec<u32>,
    // Min-heap of packed (freq, item); heap[0] is the eviction target.
    heap: Vec<u128>,
    processed: u64,
}

// Equality is logical (same counters and totals), not heap-layout identity:
// the same counter set can be arranged in different valid heaps depending on
// how it was built.
impl PartialEq for StreamSummary {
    fn eq(&self, other: &Self) -> bool {
        self.capacity == other.capacity
            && self.processed == other.processed
            && self.heap.len() == other.heap.len()
            && self
                .heap
                .iter()
                .all(|&e| other.estimate(item_of(e)) == Some(freq_of(e)))
    }
}

impl Eq for StreamSummary {}

impl StreamSummary {
    pub fn new(capacity: usize) -> Result<Self, Error> {
        if capacity == 0 {
            return Err(Error::InvalidCapacity);
        }
        Ok(Self {
            capacity,
            pos: FxHashMap::with_capacity_and_hasher(capacity, Default::default()),
            until_reseat: capacity as u64 * RESEAT_PERIOD,
            slot: Vec::with_capacity(capacity),
            handle: Vec::with_capacity(capacity),
            heap: Vec::with_capacity(capacity),
            processed: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Number of stream items this summary accounts for. Sequential updates
    /// increment it; combining summaries adds both sides' totals.
    pub fn processed(&self) -> u64 {
        self.processed
    }

    /// Smallest estimated frequency over all counters; 0 for an empty
    /// summary, so that an empty summary adds no slack on merge.
    pub fn min_frequency(&self) -> u64 {
        self.heap.first().map_or(0, |&e| freq_of(e))
    }

    /// Estimated frequency of `item` if it is currently monitored.
    pub fn estimate(&self, item: Item) -> Option<u64> {
        self.pos
            .get(&item)
            .map(|&h| freq_of(self.heap[self.slot[h as usize] as usize]))
    }

    pub fn update(&mut self, item: Item) {
        self.processed += 1;
        if let Some(&h) = self.pos.get(&item) {
            let i = self.slot[h as usize] as usize;
            self.heap[i] += pack(1, 0);
            self.sift_down(i);
        } else if self.heap.len() < self.capacity {
            let i = self.heap.len();
            debug_assert!(i <= u32::MAX as usize);
            self.heap.push(pack(1, item));
            self.handle.push(i as u32);
            self.slot.push(i as u32);
            self.pos.insert(item, i as u32);
            self.sift_up(i);
        } else {
            let root = self.heap[0];
            self.pos.remove(&item_of(root));
            self.pos.insert(item, self.handle[0]);
            self.heap[0] = pack(freq_of(root) + 1, item);
            self.sift_down(0);
            self.until_reseat -= 1;
            if self.until_reseat == 0 {
                self.reseat_map();
            }
        }
    }

    /// Counters ordered by estimated frequency ascending, ties by item id.
    pub fn counters_ascending(&self) -> Vec<Counter> {
        let mut out: Vec<Counter> = self.iter().collect();
        out.sort_unstable_by_key(|c| (c.freq, c.item));
        out
    }

    /// Flat `(item_id, est_freq)` records in `counters_ascending` order, the
    /// serialization format used for CSV dumps and golden files.
    pub fn to_records(&self) -> Vec<(u64, u64)> {
        self.counters_ascending()
            .into_iter()
            .map(|c| (c.item, c.freq))
            .collect()
    }

    /// Unordered iteration over the current counters.
    pub fn iter(&self) -> impl Iterator<Item = Counter> + '_ {
        self.heap
            .iter()
            .map(|&e| Counter { item: item_of(e), freq: freq_of(e) })
    }

    // Rebuild the locator map from the heap. Deleted slots that sit in long
    // occupied runs become tombstones, and tombstone-reusing inserts starve
    // the map's own rehash trigger, so a full summary under heavy churn
    // degrades without this.
    fn reseat_map(&mut self) {
        self.until_reseat = self.capacity as u64 * RESEAT_PERIOD;
        let mut fresh: FxHashMap<Item, u32> =
            FxHashMap::with_capacity_and_hasher(self.capacity, Default::default());
        for (i, &e) in self.heap.iter().enumerate() {
            fresh.insert(item_of(e), self.handle[i]);
        }
        self.pos = fresh;
    }

    // Counters must be unique by item and fit in `capacity`.
    pub(crate) fn from_counters(capacity: usize, counters: &[Counter], processed: u64) -> Self {
        debug_assert!(counters.len() <= capacity);
        let heap: Vec<u128> = counters.iter().map(|c| pack(c.freq, c.item)).collect();
        let pos: FxHashMap<Item, u32> = heap
            .iter()
            .enumerate()
            .map(|(i, &e)| (item_of(e), i as u32))
            .collect();
        debug_assert_eq!(pos.len(), counters.len());
        let mut s = Self {
            capacity,
            pos,
            until_reseat: capacity as u64 * RESEAT_PERIOD,
            slot: (0..heap.len() as u32).collect(),
            handle: (0..heap.len() as u32).collect(),
            heap,
            processed,
        };
        if s.heap.len() > 1 {
            for i in (0..=(s.heap.len() - 2) / ARITY).rev() {
                s.sift_down(i);
            }
        }
        s
    }

    // Hole-based sifts: shifted entries drag their handles along; nothing is
    // written when the entry is already placed.
    fn sift_up(&mut self, start: usize) {
        let entry = self.heap[start];
        let h = self.handle[start];
        let mut i = start;
        while i > 0 {
            let parent = (i - 1) / ARITY;
            if self.heap[parent] <= entry {
                break;
            }
            self.heap[i] = self.heap[parent];
            let moved = self.handle[parent];
            self.handle[i] = moved;
            self.slot[moved as usize] = i as u32;
            i = parent;
        }
        if i != start {
            self.heap[i] = entry;
            self.handle[i] = h;
            self.slot[h as usize] = i as u32;
        }
    }

    fn sift_down(&mut self, start: usize) {
        let entry = self.heap[start];
        let h = self.handle[start];
        let len = self.heap.len();
        let mut i = start;
        loop {
            let first = ARITY * i + 1;
            if first >= len {
                break;
            }
            // Branchless child pick: deep in the heap whole levels tie on
            // frequency and the item-id tiebreak is a coin flip no branch
            // predictor can learn. Entries are unique, so exactly one
            // equality fires and the sum is an arithmetic argmin.
            let (smallest, child) = if first + ARITY <= len {
                let e0 = self.heap[first];
                let e1 = self.heap[first + 1];
                let e2 = self.heap[first + 2];
                let e3 = self.heap[first + 3];
                let m = e0.min(e1).min(e2.min(e3));
                let c = (e1 == m) as usize
                    + 2 * ((e2 == m) as usize)
                    + 3 * ((e3 == m) as usize);
                (m, first + c)
            } else {
                // Short window: only ever the last parent node.
                let mut smallest = self.heap[first];
                let mut child = first;
                for c in first + 1..len {
                    if self.heap[c] < smallest {
                        smallest = self.heap[c];
                        child = c;
                    }
                }
                (smallest, child)
            };
            if entry <= smallest {
                break;
            }
            self.heap[i] = smallest;
            let moved = self.handle[child];
            self.handle[i] = moved;
            self.slot[moved as usize] = i as u32;
            i = child;
        }
        if i != start {
            self.heap[i] = entry;
            self.handle[i] = h;
            self.slot[h as usize] = i as u32;
        }
    }
}
