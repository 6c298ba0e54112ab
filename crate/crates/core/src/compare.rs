//! Agreement between dendrograms and between partitions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dendrogram::{Dendrogram, Merge};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// `t / (p - 1)`, where the first `t` merges of both dendrograms join the
/// same pairs of children. Heights are ignored.
pub fn first_difference_index<T: Scalar>(a: &Dendrogram<T>, b: &Dendrogram<T>) -> Result<f64> {
    if a.p() != b.p() {
        return Err(Error::SizeMismatch(a.p(), b.p()));
    }
    if a.is_empty() {
        return Ok(1.0);
    }
    let same = |x: &Merge<T>, y: &Merge<T>| {
        let (x0, x1) = (x.left.min(x.right), x.left.max(x.right));
        let (y0, y1) = (y.left.min(y.right), y.left.max(y.right));
        x0 == y0 && x1 == y1
    };
    let t = a
        .merges()
        .iter()
        .zip(b.merges())
        .take_while(|(x, y)| same(x, y))
        .count();
    Ok(t as f64 / a.len() as f64)
}

/// Settings for [`bakers_gamma_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BakersGammaOptions {
    /// Largest `p` for which all pairs are used.
    pub exact_cap: usize,
    /// Seed for pair subsampling beyond the cap.
    pub seed: u64,
}

impl Default for BakersGammaOptions {
    fn default() -> Self {
        Self {
            exact_cap: 2000,
            seed: 42,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BakersGamma {
    pub value: f64,
    pub pairs: usize,
    /// Seed used when pairs were subsampled.
    pub seed: Option<u64>,
}

pub fn bakers_gamma<T: Scalar>(a: &Dendrogram<T>, b: &Dendrogram<T>) -> Result<f64> {
    Ok(bakers_gamma_with(a, b, BakersGammaOptions::default())?.value)
}

/// Spearman correlation between the steps at which each pair of objects is
/// first clustered together in `a` and in `b`.
///
/// In an adjacency-constrained dendrogram objects `i < j` first share a
/// cluster at the latest step that joins across one of the boundaries
/// between them, so each fusion step is a range maximum over boundary steps.
pub fn bakers_gamma_with<T: Scalar>(
    a: &Dendrogram<T>,
    b: &Dendrogram<T>,
    opts: BakersGammaOptions,
) -> Result<BakersGamma> {
    if a.p() != b.p() {
        return Err(Error::SizeMismatch(a.p(), b.p()));
    }
    let p = a.p();
    let (sa, sb) = (a.boundary_steps(), b.boundary_steps());
    let (mut xa, mut xb) = (Vec::new(), Vec::new());
    let seed = if p <= opts.exact_cap {
        for i in 0..p {
            let (mut ma, mut mb) = (0, 0);
            for bnd in i..p - 1 {
                ma = ma.max(sa[bnd]);
                mb = mb.max(sb[bnd]);
                xa.push(ma as f64);
                xb.push(mb as f64);
            }
        }
        None
    } else {
        let (ta, tb) = (RangeMax::new(&sa), RangeMax::new(&sb));
        let n = opts.exact_cap * (opts.exact_cap - 1) / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..n {
            let i = rng.gen_range(0..p);
            let mut j = rng.gen_range(0..p - 1);
            if j >= i {
                j += 1;
            }
            let (lo, hi) = (i.min(j), i.max(j));
            xa.push(ta.query(lo, hi) as f64);
            xb.push(tb.query(lo, hi) as f64);
        }
        Some(opts.seed)
    };
    Ok(BakersGamma {
        value: spearman(&xa, &xb),
        pairs: xa.len(),
        seed,
    })
}

/// Sparse table answering `max(steps[lo..hi])` in O(1).
struct RangeMax {
    levels: Vec<Vec<usize>>,
}

impl RangeMax {
    fn new(steps: &[usize]) -> Self {
        let mut levels = vec![steps.to_vec()];
        let mut w = 1;
        while 2 * w <= steps.len() {
            let prev = levels.last().unwrap();
            let next = (0..prev.len() - w)
                .map(|i| prev[i].max(prev[i + w]))
                .collect();
            levels.push(next);
            w *= 2;
        }
        Self { levels }
    }

    fn query(&self, lo: usize, hi: usize) -> usize {
        let len = hi - lo;
        let k = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        self.levels[k][lo].max(self.levels[k][hi - (1 << k)])
    }
}

/// Spearman rank correlation with average ranks for ties.
///
/// Identical inputs give exactly 1; a constant input gives 0.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    if x == y {
        return 1.0;
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

struct Contingency {
    pairs_both: f64,
    pairs_a: f64,
    pairs_b: f64,
    pairs_total: f64,
}

fn contingency(a: &Partition, b: &Partition) -> Result<Contingency> {
    if a.p() != b.p() {
        return Err(Error::SizeMismatch(a.p(), b.p()));
    }
    let choose2 = |n: usize| (n * n.saturating_sub(1)) as f64 / 2.0;
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    let mut rows: HashMap<usize, usize> = HashMap::new();
    let mut cols: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    Ok(Contingency {
        pairs_both: table.values().map(|&n| choose2(n)).sum(),
        pairs_a: rows.values().map(|&n| choose2(n)).sum(),
        pairs_b: cols.values().map(|&n| choose2(n)).sum(),
        pairs_total: choose2(a.p()),
    })
}

/// Hubert-Arabie adjusted Rand index.
///
/// When both partitions are trivial in the same way (the index is 0/0) the
/// value is 1.
pub fn adjusted_rand(a: &Partition, b: &Partition) -> Result<f64> {
    let c = contingency(a, b)?;
    let expected = if c.pairs_total > 0.0 {
        c.pairs_a * c.pairs_b / c.pairs_total
    } else {
        0.0
    };
    let max = 0.5 * (c.pairs_a + c.pairs_b);
    if max == expected {
        return Ok(1.0);
    }
    Ok((c.pairs_both - expected) / (max - expected))
}

/// Plain Rand index: fraction of object pairs on which both partitions agree.
pub fn rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    let c = contingency(a, b)?;
    if c.pairs_total == 0.0 {
        return Ok(1.0);
    }
    let agree = c.pairs_total + 2.0 * c.pairs_both - c.pairs_a - c.pairs_b;
    Ok(agree / c.pairs_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::NodeRef;

    fn d3(first: (usize, usize)) -> Dendrogram<f64> {
        Dendrogram::from_records(
            3,
            &[
                (NodeRef::Leaf(first.0), NodeRef::Leaf(first.1), 1.0),
                (NodeRef::Merge(0), NodeRef::Leaf(3 - first.0 - first.1), 2.0),
            ],
        )
        .unwrap()
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn first_difference_cases() {
        let (a, b) = (d3((0, 1)), d3((1, 2)));
        assert_eq!(first_difference_index(&a, &a).unwrap(), 1.0);
        assert_eq!(first_difference_index(&a, &b).unwrap(), 0.0);
        let c = Dendrogram::from_records(
            4,
            &[
                (NodeRef::Leaf(0), NodeRef::Leaf(1), 1.0),
                (NodeRef::Leaf(2), NodeRef::Leaf(3), 1.0),
                (NodeRef::Merge(0), NodeRef::Merge(1), 1.0),
            ],
        )
        .unwrap();
        let e = Dendrogram::from_records(
            4,
            &[
                (NodeRef::Leaf(0), NodeRef::Leaf(1), 1.0),
                (NodeRef::Leaf(3), NodeRef::Leaf(2), 5.0),
                (NodeRef::Merge(1), NodeRef::Merge(0), 1.0),
            ],
        )
        .unwrap();
        assert_eq!(first_difference_index(&c, &e).unwrap(), 1.0);
        let f = Dendrogram::from_records(
            4,
            &[
                (NodeRef::Leaf(0), NodeRef::Leaf(1), 1.0),
                (NodeRef::Leaf(2), NodeRef::Leaf(3), 1.0),
                (NodeRef::Merge(0), NodeRef::Merge(1), 1.0),
            ],
        )
        .unwrap();
        let g = Dendrogram::from_records(
            4,
            &[
                (NodeRef::Leaf(0), NodeRef::Leaf(1), 1.0),
                (NodeRef::Merge(0), NodeRef::Leaf(2), 1.0),
                (NodeRef::Merge(1), NodeRef::Leaf(3), 1.0),
            ],
        )
        .unwrap();
        assert!((first_difference_index(&f, &g).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let x = Dendrogram::<f64>::from_records(2, &[(NodeRef::Leaf(0), NodeRef::Leaf(1), 1.0)])
            .unwrap();
        assert!(matches!(
            first_difference_index(&a, &x),
            Err(Error::SizeMismatch(3, 2))
        ));
    }

    #[test]
    fn divergence_halfway() {
        let b5 = |third: (NodeRef, NodeRef), fourth: (NodeRef, NodeRef)| {
            Dendrogram::<f64>::from_records(
                5,
                &[
                    (NodeRef::Leaf(0), NodeRef::Leaf(1), 1.0),
                    (NodeRef::Leaf(3), NodeRef::Leaf(4), 1.0),
                    (third.0, third.1, 1.0),
                    (fourth.0, fourth.1, 1.0),
                ],
            )
            .unwrap()
        };
        let u = b5(
            (NodeRef::Merge(0), NodeRef::Leaf(2)),
            (NodeRef::Merge(2), NodeRef::Merge(1)),
        );
        let v = b5(
            (NodeRef::Leaf(2), NodeRef::Merge(1)),
            (NodeRef::Merge(0), NodeRef::Merge(2)),
        );
        assert_eq!(first_difference_index(&u, &v).unwrap(), 0.5);
        assert_eq!(first_difference_index(&v, &u).unwrap(), 0.5);
    }

    #[test]
    fn bakers_gamma_small_case() {
        let (a, b) = (d3((0, 1)), d3((1, 2)));
        assert_eq!(bakers_gamma(&a, &a).unwrap(), 1.0);
        assert!((bakers_gamma(&a, &b).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn subsampled_gamma_is_reproducible() {
        let a = d3((0, 1));
        let opts = BakersGammaOptions {
            exact_cap: 2,
            seed: 7,
        };
        let g1 = bakers_gamma_with(&a, &d3((1, 2)), opts).unwrap();
        let g2 = bakers_gamma_with(&a, &d3((1, 2)), opts).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.seed, Some(7));
        assert_eq!(g1.pairs, 1);
    }

    #[test]
    fn range_max_matches_scan() {
        let steps = vec![3, 9, 1, 4, 7, 2, 8, 5, 6];
        let t = RangeMax::new(&steps);
        for lo in 0..steps.len() {
            for hi in lo + 1..=steps.len() {
                assert_eq!(t.query(lo, hi), *steps[lo..hi].iter().max().unwrap());
            }
        }
    }

    #[test]
    fn spearman_ties() {
        assert!((spearman(&[1.0, 2.0, 2.0], &[2.0, 2.0, 1.0]) + 0.5).abs() < 1e-12);
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn ari_cases() {
        let a = part(&[1, 1, 2, 2]);
        assert_eq!(adjusted_rand(&a, &a).unwrap(), 1.0);
        assert!((adjusted_rand(&a, &part(&[1, 2, 1, 2])).unwrap() + 0.5).abs() < 1e-12);
        let one = part(&[1; 6]);
        let singles = part(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(adjusted_rand(&one, &singles).unwrap(), 0.0);
        assert_eq!(adjusted_rand(&singles, &singles).unwrap(), 1.0);
        assert!(matches!(
            adjusted_rand(&a, &one),
            Err(Error::SizeMismatch(4, 6))
        ));
    }

    #[test]
    fn rand_cases() {
        let a = part(&[1, 1, 2, 2]);
        assert_eq!(rand_index(&a, &a).unwrap(), 1.0);
        // agreeing pairs: (1,4) and (2,3) are split in both
        assert!((rand_index(&a, &part(&[1, 2, 1, 2])).unwrap() - 2.0 / 6.0).abs() < 1e-15);
    }
}
