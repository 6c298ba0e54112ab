//! Quadratic reference clustering used to check the fast engine.
//!
//! Nothing here touches pencils or the heap: every step recomputes every
//! adjacent linkage from direct double sums over a dense matrix.

use crate::band::BandMatrix;
use crate::dendrogram::{Dendrogram, Merge, NodeRef};
use crate::scalar::Scalar;

/// Full symmetric `p x p` similarity, zeros outside the band.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSimilarity<T> {
    p: usize,
    values: Vec<T>,
}

impl<T: Scalar> DenseSimilarity<T> {
    pub fn from_band(m: &BandMatrix<T>) -> Self {
        let p = m.p();
        let mut values = Vec::with_capacity(p * p);
        for i in 0..p {
            for j in 0..p {
                values.push(m.get(i, j));
            }
        }
        Self { p, values }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.p + j]
    }

    fn block_sum(&self, start: usize, end: usize) -> T {
        let mut s = T::zero();
        for a in start..end {
            for b in start..end {
                s = s + self.get(a, b);
            }
        }
        s
    }
}

/// Gram matrix `<x_i, x_j>` of a point cloud, full bandwidth.
pub fn gram<T: Scalar>(points: &[Vec<T>]) -> BandMatrix<T> {
    let p = points.len();
    let diagonals: Vec<Vec<T>> = (0..p)
        .map(|d| {
            (0..p - d)
                .map(|i| {
                    points[i]
                        .iter()
                        .zip(&points[i + d])
                        .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
                })
                .collect()
        })
        .collect();
    BandMatrix::from_diagonals(&diagonals).expect("non-empty point cloud")
}

/// Literal transcription of adjacency-constrained Ward HAC.
///
/// At each step the leftmost adjacent pair with minimal linkage is merged.
pub fn cluster_naive<T: Scalar>(m: &DenseSimilarity<T>) -> Dendrogram<T> {
    let p = m.p();
    agglomerate(p, |start, mid, end| {
        let nl = T::from_usize_lossy(mid - start);
        let nr = T::from_usize_lossy(end - mid);
        let n = T::from_usize_lossy(end - start);
        m.block_sum(start, mid) / nl + m.block_sum(mid, end) / nr - m.block_sum(start, end) / n
    })
}

/// Constrained Ward HAC on points, with linkage equal to the increase of the
/// error sum of squares `ESS(L u R) - ESS(L) - ESS(R)`.
pub fn euclidean_ward_check<T: Scalar>(points: &[Vec<T>]) -> Dendrogram<T> {
    let ess = |start: usize, end: usize| -> T {
        let d = points[start].len();
        let n = T::from_usize_lossy(end - start);
        let mut total = T::zero();
        for k in 0..d {
            let mean = points[start..end]
                .iter()
                .fold(T::zero(), |acc, x| acc + x[k])
                / n;
            total = points[start..end]
                .iter()
                .fold(total, |acc, x| acc + (x[k] - mean) * (x[k] - mean));
        }
        total
    };
    agglomerate(points.len(), |start, mid, end| {
        ess(start, end) - ess(start, mid) - ess(mid, end)
    })
}

fn agglomerate<T: Scalar>(p: usize, linkage: impl Fn(usize, usize, usize) -> T) -> Dendrogram<T> {
    // (start, end, node) for each active cluster, in order
    let mut clusters: Vec<(usize, usize, NodeRef)> =
        (0..p).map(|i| (i, i + 1, NodeRef::Leaf(i))).collect();
    let mut merges = Vec::with_capacity(p.saturating_sub(1));
    for t in 0..p.saturating_sub(1) {
        let mut best: Option<(usize, T)> = None;
        for u in 0..clusters.len() - 1 {
            let (start, mid, _) = clusters[u];
            let end = clusters[u + 1].1;
            let delta = linkage(start, mid, end);
            if best.is_none_or(|(_, b)| delta < b) {
                best = Some((u, delta));
            }
        }
        let (u, height) = best.expect("at least two clusters remain");
        let (start, mid, left) = clusters[u];
        let (_, end, right) = clusters.remove(u + 1);
        merges.push(Merge {
            left,
            right,
            height,
            start,
            mid,
            end,
        });
        clusters[u] = (start, end, NodeRef::Merge(t));
    }
    Dendrogram::from_merges_unchecked(p, merges)
}
