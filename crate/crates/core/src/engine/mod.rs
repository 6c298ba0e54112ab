//! Quasi-linear adjacency-constrained Ward clustering.
//!
//! Active clusters form a chain ordered along `0..p`; each is identified by
//! its start position. Candidate fusions between chain neighbours live in a
//! [`FusionHeap`]; after a merge at most two new candidates are pushed and
//! stale ones are discarded when they reach the root. Linkages come from a
//! [`PencilTable`] in O(1), so a full run costs O(ph + p log p).

mod heap;

pub use heap::{CandidateFusion, FusionHeap};

use crate::band::BandMatrix;
use crate::dendrogram::{Dendrogram, Merge, NodeRef};
use crate::pencil::PencilTable;
use crate::scalar::Scalar;

const NONE: usize = usize::MAX;

/// Bookkeeping from one clustering run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub pencil_entries: usize,
    pub heap_max_len: usize,
    pub heap_pushes: usize,
    pub heap_pops: usize,
}

/// Doubly linked chain of active clusters, indexed by start position.
#[derive(Debug)]
struct ClusterChain {
    end: Vec<usize>,
    prev: Vec<usize>,
    stamp: Vec<usize>,
    active: Vec<bool>,
    node: Vec<NodeRef>,
}

impl ClusterChain {
    fn singletons(p: usize) -> Self {
        Self {
            end: (1..=p).collect(),
            prev: (0..p).map(|i| if i == 0 { NONE } else { i - 1 }).collect(),
            stamp: vec![0; p],
            active: vec![true; p],
            node: (0..p).map(NodeRef::Leaf).collect(),
        }
    }

    fn is_current<T>(&self, c: &CandidateFusion<T>) -> bool {
        self.active[c.left]
            && self.active[c.right]
            && self.stamp[c.left] == c.stamp_left
            && self.stamp[c.right] == c.stamp_right
    }
}

pub fn cluster<T: Scalar>(m: &BandMatrix<T>) -> Dendrogram<T> {
    cluster_with_stats(m).0
}

/// Clusters `S + lambda * I`; the merge order matches `cluster(m)` and every
/// height is shifted by `lambda`.
pub fn cluster_shifted<T: Scalar>(m: &BandMatrix<T>, lambda: T) -> Dendrogram<T> {
    cluster(&m.shift_diagonal(lambda))
}

pub fn cluster_with_stats<T: Scalar>(m: &BandMatrix<T>) -> (Dendrogram<T>, RunStats) {
    let p = m.p();
    let pencils = PencilTable::new(m);
    let mut chain = ClusterChain::singletons(p);
    let mut heap = FusionHeap::with_capacity(3 * p);

    let candidate = |chain: &ClusterChain, left: usize, right: usize| CandidateFusion {
        linkage: pencils.linkage_unchecked(left, right, chain.end[right]),
        left,
        right,
        stamp_left: chain.stamp[left],
        stamp_right: chain.stamp[right],
    };

    for i in 0..p.saturating_sub(1) {
        heap.push(candidate(&chain, i, i + 1));
    }

    let mut merges = Vec::with_capacity(p.saturating_sub(1));
    for t in 0..p.saturating_sub(1) {
        let best = heap
            .pop_valid(|c| chain.is_current(c))
            .expect("every active neighbour pair has a current candidate");
        let (left, right) = (best.left, best.right);
        let end = chain.end[right];
        merges.push(Merge {
            left: chain.node[left],
            right: chain.node[right],
            height: best.linkage,
            start: left,
            mid: right,
            end,
        });

        chain.active[right] = false;
        chain.end[left] = end;
        chain.stamp[left] = t + 1;
        chain.node[left] = NodeRef::Merge(t);
        if end < p {
            chain.prev[end] = left;
        }

        let before = chain.prev[left];
        if before != NONE {
            heap.push(candidate(&chain, before, left));
        }
        if end < p {
            heap.push(candidate(&chain, left, end));
        }
    }

    let stats = RunStats {
        pencil_entries: pencils.entry_count(),
        heap_max_len: heap.max_len(),
        heap_pushes: heap.pushes(),
        heap_pops: heap.pops(),
    };
    (Dendrogram::from_merges_unchecked(p, merges), stats)
}
