//! Binary indexed tree over counts, used for crossing accumulation.

/// Fenwick tree holding `u64` counts for indices `1..=n`.
pub struct FenwickTree {
    tree: Vec<u64>,
}

impl FenwickTree {
    pub fn new(n: usize) -> Self {
        FenwickTree {
            tree: vec![0; n + 1],
        }
    }

    /// Add `delta` at index `i` (1-based).
    pub fn add(&mut self, mut i: usize, delta: u64) {
        debug_assert!(i >= 1 && i < self.tree.len());
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `1..=i`.
    pub fn prefix_sum(&self, mut i: usize) -> u64 {
        let mut s = 0;
        i = i.min(self.tree.len() - 1);
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Sum over `lo..=hi`, empty ranges allowed.
    pub fn range_sum(&self, lo: usize, hi: usize) -> u64 {
        if lo > hi {
            return 0;
        }
        self.prefix_sum(hi) - if lo > 1 { self.prefix_sum(lo - 1) } else { 0 }
    }

    /// Total count stored.
    pub fn total(&self) -> u64 {
        self.prefix_sum(self.tree.len() - 1)
    }
}
