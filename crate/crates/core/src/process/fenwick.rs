/// Binary indexed tree over nonnegative `f64` weights with weighted selection.
#[derive(Clone, Debug)]
pub struct PrefixSumTree {
    tree: Vec<f64>,
    /// Highest power of two not exceeding `tree.len()`.
    top_bit: usize,
    total: f64,
}

impl PrefixSumTree {
    /// A tree of `capacity` slots, all weights zero.
    pub fn with_capacity(capacity: usize) -> Self {
        let top_bit = if capacity == 0 {
            0
        } else {
            1 << (usize::BITS - 1 - capacity.leading_zeros())
        };
        Self {
            tree: vec![0.0; capacity],
            top_bit,
            total: 0.0,
        }
    }

    /// Rebuilds in O(n) from explicit weights; slots past `weights.len()` are zero.
    pub fn rebuild<I: IntoIterator<Item = f64>>(&mut self, weights: I) {
        self.tree.iter_mut().for_each(|w| *w = 0.0);
        for (slot, w) in self.tree.iter_mut().zip(weights) {
            *slot = w;
        }
        let n = self.tree.len();
        for i in 1..=n {
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                let v = self.tree[i - 1];
                self.tree[parent - 1] += v;
            }
        }
        self.total = self.prefix_sum(n);
    }

    pub fn capacity(&self) -> usize {
        self.tree.len()
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Adds `delta` to slot `idx` (0-based).
    #[inline]
    pub fn add(&mut self, idx: usize, delta: f64) {
        let mut i = idx + 1;
        while i <= self.tree.len() {
            self.tree[i - 1] += delta;
            i += i & i.wrapping_neg();
        }
        self.total += delta;
    }

    /// Sum of slots `0..count`.
    pub fn prefix_sum(&self, count: usize) -> f64 {
        let mut i = count.min(self.tree.len());
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i - 1];
            i &= i - 1;
        }
        sum
    }

    /// Smallest slot whose inclusive prefix sum exceeds `target`, clamped to
    /// `limit - 1`. `target` is expected in `[0, total)`.
    #[inline]
    pub fn select(&self, mut target: f64, limit: usize) -> usize {
        let mut pos = 0;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next <= self.tree.len() {
                let w = self.tree[next - 1];
                if w <= target {
                    target -= w;
                    pos = next;
                }
            }
            step >>= 1;
        }
        pos.min(limit - 1)
    }
}
