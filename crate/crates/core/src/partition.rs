use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A flat clustering of `p` objects given by one label per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty);
        }
        let k = labels.iter().collect::<BTreeSet<_>>().len();
        Ok(Self { labels, k })
    }

    pub(crate) fn from_labels_unchecked(labels: Vec<usize>, k: usize) -> Self {
        Self { labels, k }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn p(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True when every cluster is a run of consecutive objects.
    pub fn is_contiguous(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut prev = None;
        for &l in &self.labels {
            if prev != Some(l) && !seen.insert(l) {
                return false;
            }
            prev = Some(l);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_clusters() {
        let p = Partition::new(vec![3, 3, 1, 7]).unwrap();
        assert_eq!(p.k(), 3);
        assert!(p.is_contiguous());
        assert!(!Partition::new(vec![1, 2, 1]).unwrap().is_contiguous());
        assert!(Partition::new(vec![]).is_err());
    }
}
