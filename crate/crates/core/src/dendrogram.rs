//! Stepwise dendrograms of adjacency-constrained clusterings.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Child reference in a merge record.
///
/// In text form a leaf `i` (0-based) is written `-(i + 1)` and the result of
/// merge `t` (0-based) is written `t + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Leaf(usize),
    Merge(usize),
}

impl NodeRef {
    pub fn to_signed(self) -> i64 {
        match self {
            NodeRef::Leaf(i) => -(i as i64) - 1,
            NodeRef::Merge(t) => t as i64 + 1,
        }
    }

    pub fn from_signed(v: i64) -> Option<Self> {
        match v {
            0 => None,
            v if v < 0 => Some(NodeRef::Leaf((-v - 1) as usize)),
            v => Some(NodeRef::Merge((v - 1) as usize)),
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// One fusion: `left` covers `start..mid`, `right` covers `mid..end` (0-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge<T> {
    pub left: NodeRef,
    pub right: NodeRef,
    pub height: T,
    pub start: usize,
    pub mid: usize,
    pub end: usize,
}

impl<T> Merge<T> {
    pub fn left_size(&self) -> usize {
        self.mid - self.start
    }

    pub fn right_size(&self) -> usize {
        self.end - self.mid
    }

    pub fn size(&self) -> usize {
        self.end - self.start
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram<T> {
    p: usize,
    merges: Vec<Merge<T>>,
}

impl<T: Scalar> Dendrogram<T> {
    pub(crate) fn from_merges_unchecked(p: usize, merges: Vec<Merge<T>>) -> Self {
        debug_assert!(merges.len() + 1 == p || (p == 0 && merges.is_empty()));
        Self { p, merges }
    }

    /// Rebuilds a dendrogram from `(left, right, height)` records, checking
    /// that every merge joins two adjacent, currently active clusters and
    /// that the records describe a full hierarchy over `p` objects.
    pub fn from_records(p: usize, records: &[(NodeRef, NodeRef, T)]) -> Result<Self> {
        if p == 0 {
            return Err(Error::Empty);
        }
        if records.len() + 1 != p {
            return Err(Error::InvalidMerges(format!(
                "{} merges for {} objects, expected {}",
                records.len(),
                p,
                p - 1
            )));
        }
        let mut used_leaf = vec![false; p];
        let mut used_merge = vec![false; records.len()];
        let mut merges: Vec<Merge<T>> = Vec::with_capacity(records.len());
        for (t, &(a, b, height)) in records.iter().enumerate() {
            let mut span = |r: NodeRef| -> Result<(usize, usize)> {
                match r {
                    NodeRef::Leaf(i) if i < p && !used_leaf[i] => {
                        used_leaf[i] = true;
                        Ok((i, i + 1))
                    }
                    NodeRef::Merge(s) if s < t && !used_merge[s] => {
                        used_merge[s] = true;
                        Ok((merges[s].start, merges[s].end))
                    }
                    _ => Err(Error::InvalidMerges(format!(
                        "merge {}: reference {} is unknown or already merged",
                        t + 1,
                        r
                    ))),
                }
            };
            let (sa, ea) = span(a)?;
            let (sb, eb) = span(b)?;
            let (left, right, start, mid, end) = if ea == sb {
                (a, b, sa, ea, eb)
            } else if eb == sa {
                (b, a, sb, eb, ea)
            } else {
                return Err(Error::InvalidMerges(format!(
                    "merge {}: clusters {}..{} and {}..{} are not adjacent",
                    t + 1,
                    sa + 1,
                    ea,
                    sb + 1,
                    eb
                )));
            };
            if !height.is_finite() {
                return Err(Error::InvalidMerges(format!(
                    "merge {}: non-finite height",
                    t + 1
                )));
            }
            merges.push(Merge {
                left,
                right,
                height,
                start,
                mid,
                end,
            });
        }
        Ok(Self { p, merges })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn merges(&self) -> &[Merge<T>] {
        &self.merges
    }

    pub fn len(&self) -> usize {
        self.merges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.merges.is_empty()
    }

    pub fn heights(&self) -> Vec<T> {
        self.merges.iter().map(|m| m.height).collect()
    }

    /// For each boundary `b` between objects `b` and `b + 1` (0-based), the
    /// 1-based step at which a merge first joins across it.
    pub fn boundary_steps(&self) -> Vec<usize> {
        let mut steps = vec![0; self.p.saturating_sub(1)];
        for (t, m) in self.merges.iter().enumerate() {
            steps[m.mid - 1] = t + 1;
        }
        steps
    }

    /// The `k` clusters obtained by undoing the last `k - 1` merges.
    ///
    /// Labels run from 1 to `k`, left to right.
    pub fn cut(&self, k: usize) -> Result<Partition> {
        if k == 0 || k > self.p {
            return Err(Error::ClusterCount { k, p: self.p });
        }
        let kept = self.p - k;
        let mut labels = Vec::with_capacity(self.p);
        let mut label = 1;
        labels.push(label);
        for &step in &self.boundary_steps() {
            if step > kept {
                label += 1;
            }
            labels.push(label);
        }
        Ok(Partition::from_labels_unchecked(labels, k))
    }

    /// The same hierarchy described on the reversed object order.
    pub fn mirrored(&self) -> Self {
        let p = self.p;
        let flip = |r: NodeRef| match r {
            NodeRef::Leaf(i) => NodeRef::Leaf(p - 1 - i),
            m => m,
        };
        let merges = self
            .merges
            .iter()
            .map(|m| Merge {
                left: flip(m.right),
                right: flip(m.left),
                height: m.height,
                start: p - m.end,
                mid: p - m.mid,
                end: p - m.start,
            })
            .collect();
        Self { p, merges }
    }
}
