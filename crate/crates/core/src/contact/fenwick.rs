use alloc::vec::Vec;

/// Binary indexed tree over non-negative integer weights, supporting point
/// updates and sampling an index proportionally to its weight.
#[derive(Debug, Clone)]
pub(crate) struct Fenwick {
    tree: Vec<u64>,
    values: Vec<u64>,
    top_bit: usize,
}

impl Fenwick {
    pub(crate) fn new(n: usize) -> Self {
        let top_bit = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        Fenwick { tree: alloc::vec![0; n + 1], values: alloc::vec![0; n], top_bit }
    }

    pub(crate) fn get(&self, i: usize) -> u64 {
        self.values[i]
    }

    pub(crate) fn set(&mut self, i: usize, value: u64) {
        let delta = value.wrapping_sub(self.values[i]);
        self.values[i] = value;
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] = self.tree[k].wrapping_add(delta);
            k += k & k.wrapping_neg();
        }
    }

    pub(crate) fn add(&mut self, i: usize, delta: u64) {
        self.set(i, self.values[i] + delta);
    }

    pub(crate) fn sub(&mut self, i: usize, delta: u64) {
        self.set(i, self.values[i] - delta);
    }

    pub(crate) fn total(&self) -> u64 {
        let mut sum = 0u64;
        let mut k = self.tree.len() - 1;
        while k > 0 {
            sum = sum.wrapping_add(self.tree[k]);
            k &= k - 1;
        }
        sum
    }

    /// Index `i` with `prefix(i) <= target < prefix(i + 1)`, where
    /// `prefix(i)` sums the weights before `i`. Requires `target < total()`.
    pub(crate) fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn find_inverts_prefix_sums(weights in proptest::collection::vec(0u64..50, 1..200), updates in proptest::collection::vec((0usize..200, 0u64..50), 0..50)) {
            let mut f = Fenwick::new(weights.len());
            let mut w = weights.clone();
            for (i, &x) in weights.iter().enumerate() {
                f.set(i, x);
            }
            for (i, x) in updates {
                let i = i % w.len();
                w[i] = x;
                f.set(i, x);
            }
            prop_assert_eq!(f.total(), w.iter().sum::<u64>());
            let mut prefix = 0;
            for (i, &x) in w.iter().enumerate() {
                for t in prefix..prefix + x {
                    prop_assert_eq!(f.find(t), i);
                }
                prefix += x;
            }
        }
    }
}
