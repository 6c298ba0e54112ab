//! Binary min-heap of candidate fusions with lazy invalidation.

use std::cmp::Ordering;

use crate::scalar::Scalar;

/// A candidate fusion of the adjacent clusters starting at `left` and `right`.
///
/// The stamps record the step at which each cluster was created; a candidate
/// is stale once either cluster has been merged into something else.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateFusion<T> {
    pub linkage: T,
    pub left: usize,
    pub right: usize,
    pub stamp_left: usize,
    pub stamp_right: usize,
}

impl<T: Scalar> CandidateFusion<T> {
    /// Heap order: smaller linkage first, then leftmost pair.
    fn precedes(&self, other: &Self) -> bool {
        match self.linkage.partial_cmp(&other.linkage) {
            Some(Ordering::Less) => true,
            Some(Ordering::Greater) => false,
            _ => self.left < other.left,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FusionHeap<T> {
    items: Vec<CandidateFusion<T>>,
    max_len: usize,
    pushes: usize,
    pops: usize,
}

impl<T: Scalar> FusionHeap<T> {
    pub fn new() -> Self {
        Self {
            items: Vec::new(),
            max_len: 0,
            pushes: 0,
            pops: 0,
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            items: Vec::with_capacity(n),
            ..Self::new()
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Largest size reached so far.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn pushes(&self) -> usize {
        self.pushes
    }

    /// Number of roots removed, stale ones included.
    pub fn pops(&self) -> usize {
        self.pops
    }

    pub fn push(&mut self, c: CandidateFusion<T>) {
        self.items.push(c);
        self.pushes += 1;
        self.max_len = self.max_len.max(self.items.len());
        self.sift_up(self.items.len() - 1);
    }

    pub fn peek(&self) -> Option<&CandidateFusion<T>> {
        self.items.first()
    }

    pub fn pop_min(&mut self) -> Option<CandidateFusion<T>> {
        if self.items.is_empty() {
            return None;
        }
        let last = self.items.len() - 1;
        self.items.swap(0, last);
        let top = self.items.pop();
        self.pops += 1;
        if !self.items.is_empty() {
            self.sift_down(0);
        }
        top
    }

    /// Pops roots until one satisfies `is_valid`, discarding stale entries.
    pub fn pop_valid<F>(&mut self, mut is_valid: F) -> Option<CandidateFusion<T>>
    where
        F: FnMut(&CandidateFusion<T>) -> bool,
    {
        while let Some(c) = self.pop_min() {
            if is_valid(&c) {
                return Some(c);
            }
        }
        None
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.items[i].precedes(&self.items[parent]) {
                break;
            }
            self.items.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.items.len();
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < n && self.items[l].precedes(&self.items[best]) {
                best = l;
            }
            if r < n && self.items[r].precedes(&self.items[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.items.swap(i, best);
            i = best;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(linkage: f64, left: usize) -> CandidateFusion<f64> {
        CandidateFusion {
            linkage,
            left,
            right: left + 1,
            stamp_left: 0,
            stamp_right: 0,
        }
    }

    #[test]
    fn peek_is_min() {
        let mut h = FusionHeap::new();
        for (k, x) in [5.0, 1.0, 3.0].into_iter().enumerate() {
            h.push(cand(x, k));
        }
        assert_eq!(h.peek().unwrap().linkage, 1.0);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn stale_entries_are_skipped() {
        let mut h = FusionHeap::new();
        for (k, x) in [5.0, 1.0, 3.0].into_iter().enumerate() {
            h.push(cand(x, k));
        }
        // invalidate the key-1 candidate
        let got = h.pop_valid(|c| c.left != 1).unwrap();
        assert_eq!(got.linkage, 3.0);
        assert_eq!(h.pops(), 2);
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn empty_pop() {
        let mut h = FusionHeap::<f64>::new();
        assert!(h.pop_min().is_none());
        assert!(h.pop_valid(|_| true).is_none());
    }

    #[test]
    fn ties_resolve_leftmost() {
        let mut h = FusionHeap::new();
        for left in [4, 2, 7, 0, 3] {
            h.push(cand(1.0, left));
        }
        let order: Vec<_> = std::iter::from_fn(|| h.pop_min()).map(|c| c.left).collect();
        assert_eq!(order, vec![0, 2, 3, 4, 7]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn heapsort_order(keys in proptest::collection::vec(-1e6f64..1e6, 0..200)) {
                let mut h = FusionHeap::new();
                for (i, &k) in keys.iter().enumerate() {
                    h.push(cand(k, i));
                }
                let popped: Vec<f64> = std::iter::from_fn(|| h.pop_min()).map(|c| c.linkage).collect();
                prop_assert_eq!(popped.len(), keys.len());
                prop_assert!(popped.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
