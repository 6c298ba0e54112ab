//! Forward and backward pencil sums.
//!
//! For a band matrix of size `p` and bandwidth `h`, the forward pencil
//! `P(r, l)` is the sum of `s[a][b]` over `1 <= a, b <= r` with `|a - b| < l`,
//! and the backward pencil `B(r, l)` is the same sum over `r <= a, b <= p`
//! (indices 1-based, `1 <= r <= p`, `1 <= l <= h`).
//!
//! For a contiguous cluster `C = {i, ..., j-1}` of size `k` and `w = min(h, k)`,
//!
//! ```text
//! S(C) = P(j - 1, w) + B(i, w) - P(p, w)
//! ```
//!
//! because every entry of the width-`w` band lies in the leading `(j-1)`
//! block or the trailing block starting at `i`, and the two overlap exactly
//! on `C x C`. Each query is therefore O(1) after an O(ph) precomputation.

use std::ops::Range;

use crate::band::BandMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Compensated, Scalar};

#[derive(Clone, Debug)]
pub struct PencilTable<T> {
    p: usize,
    h: usize,
    forward: Vec<Compensated<T>>,
    backward: Vec<Compensated<T>>,
    full: Vec<Compensated<T>>,
}

impl<T: Scalar> PencilTable<T> {
    /// Precomputes all `2ph` pencils in O(ph) time.
    pub fn new(m: &BandMatrix<T>) -> Self {
        let (p, h) = (m.p(), m.h());
        let two = T::one() + T::one();
        let mut forward = vec![Compensated::zero(); p * h];
        let mut backward = vec![Compensated::zero(); p * h];

        // P(r, l) = P(r-1, l) + s_rr + 2 * sum_{d=1}^{l-1} s_{r-d, r}
        for r in 0..p {
            let mut row = Compensated::new(m.row(r)[0]);
            for l in 0..h {
                if l > 0 && l <= r {
                    row = row.add_value(two * m.row(r - l)[l]);
                }
                let prev = if r == 0 {
                    Compensated::zero()
                } else {
                    forward[(r - 1) * h + l]
                };
                forward[r * h + l] = prev.add_compensated(row);
            }
        }

        // B(r, l) = B(r+1, l) + s_rr + 2 * sum_{d=1}^{l-1} s_{r, r+d}
        for r in (0..p).rev() {
            let band = m.row(r);
            let mut row = Compensated::new(band[0]);
            for l in 0..h {
                if l > 0 && r + l < p {
                    row = row.add_value(two * band[l]);
                }
                let prev = if r + 1 == p {
                    Compensated::zero()
                } else {
                    backward[(r + 1) * h + l]
                };
                backward[r * h + l] = prev.add_compensated(row);
            }
        }

        let full = forward[(p - 1) * h..].to_vec();
        Self {
            p,
            h,
            forward,
            backward,
            full,
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Number of stored pencil values: `2ph` table entries plus `h` full pencils.
    pub fn entry_count(&self) -> usize {
        self.forward.len() + self.backward.len() + self.full.len()
    }

    /// Forward pencil `P(r, l)`, 1-based `r` in `1..=p`, `l` in `1..=h`.
    pub fn forward(&self, r: usize, l: usize) -> T {
        assert!((1..=self.p).contains(&r) && (1..=self.h).contains(&l));
        self.forward[(r - 1) * self.h + l - 1].value()
    }

    /// Backward pencil `B(r, l)`, 1-based `r` in `1..=p`, `l` in `1..=h`.
    pub fn backward(&self, r: usize, l: usize) -> T {
        assert!((1..=self.p).contains(&r) && (1..=self.h).contains(&l));
        self.backward[(r - 1) * self.h + l - 1].value()
    }

    /// Full pencil `P(p, l)`.
    pub fn full(&self, l: usize) -> T {
        assert!((1..=self.h).contains(&l));
        self.full[l - 1].value()
    }

    /// Sum of similarities over `C x C` for the cluster `range` (0-based, half-open).
    pub fn cluster_sum(&self, range: Range<usize>) -> Result<T> {
        if range.start >= range.end || range.end > self.p {
            return Err(Error::InvalidRange {
                start: range.start,
                end: range.end,
                p: self.p,
            });
        }
        Ok(self.cluster_sum_unchecked(range.start, range.end))
    }

    #[inline]
    pub(crate) fn cluster_sum_unchecked(&self, start: usize, end: usize) -> T {
        debug_assert!(start < end && end <= self.p);
        let w = (end - start).min(self.h) - 1;
        let h = self.h;
        self.forward[(end - 1) * h + w]
            .add_compensated(self.backward[start * h + w])
            .add_compensated(self.full[w].negated())
            .value()
    }

    /// Ward linkage between two adjacent clusters `left` and `right`.
    ///
    /// `S(L)/|L| + S(R)/|R| - S(L u R)/|L u R|`, from three pencil queries.
    pub fn ward_linkage(&self, left: Range<usize>, right: Range<usize>) -> Result<T> {
        if left.end != right.start || left.start >= left.end || right.start >= right.end {
            return Err(Error::NotAdjacent {
                left: (left.start, left.end),
                right: (right.start, right.end),
            });
        }
        if right.end > self.p {
            return Err(Error::InvalidRange {
                start: right.start,
                end: right.end,
                p: self.p,
            });
        }
        Ok(self.linkage_unchecked(left.start, left.end, right.end))
    }

    #[inline]
    pub(crate) fn linkage_unchecked(&self, start: usize, mid: usize, end: usize) -> T {
        let nl = T::from_usize_lossy(mid - start);
        let nr = T::from_usize_lossy(end - mid);
        let n = T::from_usize_lossy(end - start);
        self.cluster_sum_unchecked(start, mid) / nl + self.cluster_sum_unchecked(mid, end) / nr
            - self.cluster_sum_unchecked(start, end) / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::DenseOptions;

    fn m3() -> BandMatrix<f64> {
        let v = vec![
            vec![1.0, 0.5, 0.0],
            vec![0.5, 1.0, 0.2],
            vec![0.0, 0.2, 1.0],
        ];
        BandMatrix::from_dense(&v, 2, DenseOptions::default()).unwrap()
    }

    // direct double sum over the pencil index set
    fn brute_forward(m: &BandMatrix<f64>, r: usize, l: usize) -> f64 {
        let mut s = 0.0;
        for a in 0..r {
            for b in 0..r {
                if a.abs_diff(b) < l {
                    s += m.get(a, b);
                }
            }
        }
        s
    }

    #[test]
    fn m3_pencils() {
        let t = PencilTable::new(&m3());
        assert_eq!(t.forward(1, 1), 1.0);
        assert_eq!(t.forward(2, 2), 3.0);
        assert!((t.forward(3, 2) - 4.4).abs() < 1e-15);
        assert!((t.backward(2, 2) - 2.4).abs() < 1e-15);
        assert!((t.backward(1, 2) - 4.4).abs() < 1e-15);
        assert_eq!(t.full(2), t.forward(3, 2));
        assert_eq!(t.entry_count(), 2 * 3 * 2 + 2);
        for r in 1..=3 {
            for l in 1..=2 {
                assert!((t.forward(r, l) - brute_forward(&m3(), r, l)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_pencils() {
        let t = PencilTable::new(&BandMatrix::<f64>::identity(4, 1).unwrap());
        for r in 1..=4 {
            assert_eq!(t.forward(r, 1), r as f64);
        }
    }

    #[test]
    fn m3_cluster_sums() {
        let t = PencilTable::new(&m3());
        assert!((t.cluster_sum(0..2).unwrap() - 3.0).abs() < 1e-15);
        assert!((t.cluster_sum(1..3).unwrap() - 2.4).abs() < 1e-15);
        assert!((t.cluster_sum(0..3).unwrap() - 4.4).abs() < 1e-15);
        for i in 0..3 {
            assert_eq!(t.cluster_sum(i..i + 1).unwrap(), 1.0);
        }
        assert!(t.cluster_sum(2..2).is_err());
        assert!(t.cluster_sum(1..4).is_err());
    }

    #[test]
    fn m3_linkages() {
        let t = PencilTable::new(&m3());
        assert!((t.ward_linkage(0..1, 1..2).unwrap() - 0.5).abs() < 1e-15);
        let d = t.ward_linkage(0..2, 2..3).unwrap();
        assert!((d - (1.5 + 1.0 - 4.4 / 3.0)).abs() < 1e-15);
        assert!((d - 1.033333333333).abs() < 1e-9);
        assert!(matches!(
            t.ward_linkage(0..1, 2..3),
            Err(Error::NotAdjacent { .. })
        ));
        assert!(t.ward_linkage(0..2, 1..3).is_err());
    }

    #[test]
    fn unit_diagonal_singletons() {
        let m =
            BandMatrix::<f64>::from_diagonals(&[vec![1.0; 5], vec![0.1, 0.7, 0.3, 0.9]]).unwrap();
        let t = PencilTable::new(&m);
        for i in 0..4 {
            let d = t.ward_linkage(i..i + 1, i + 1..i + 2).unwrap();
            assert!((d - (1.0 - m.get(i, i + 1))).abs() < 1e-15);
        }
    }

    #[test]
    fn f32_table() {
        let m = BandMatrix::<f32>::identity(3, 2).unwrap();
        let t = PencilTable::new(&m);
        assert_eq!(t.cluster_sum(0..3).unwrap(), 3.0);
        assert_eq!(t.ward_linkage(0..1, 1..2).unwrap(), 1.0);
    }
}
