use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::BandMatrix;

/// Sparse intra-chromosomal contact counts, keyed by 1-based `(i, j)` with `i <= j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactMatrix<T> {
    p: usize,
    counts: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> ContactMatrix<T> {
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            p,
            counts: BTreeMap::new(),
        })
    }

    pub fn from_triplets(p: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut c = Self::new(p)?;
        for &(i, j, v) in triplets {
            c.insert(i, j, v)?;
        }
        Ok(c)
    }

    /// Records a count; `(i, j)` and `(j, i)` address the same pair.
    pub fn insert(&mut self, i: usize, j: usize, count: T) -> Result<()> {
        if i == 0 || j == 0 || i > self.p || j > self.p {
            return Err(Error::IndexOutOfRange { i, j, p: self.p });
        }
        if !count.is_finite() {
            return Err(Error::NonFinite { i, j });
        }
        if count < T::zero() {
            return Err(Error::NegativeCount {
                i,
                j,
                value: count.to_f64_lossy(),
            });
        }
        let key = (i.min(j), i.max(j));
        match self.counts.insert(key, count) {
            Some(prev) if prev != count => Err(Error::Duplicate { i, j }),
            _ => Ok(()),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.counts
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or_else(T::zero)
    }
}

/// Banded similarity `log(1 + count)`; absent pairs are 0.
pub fn build_hic_log<T: Scalar>(c: &ContactMatrix<T>, h: usize) -> Result<BandMatrix<T>> {
    let mut m = BandMatrix::zeros(c.p, h)?;
    for (&(i, j), &v) in &c.counts {
        if v < T::zero() {
            return Err(Error::NegativeCount {
                i,
                j,
                value: v.to_f64_lossy(),
            });
        }
        let d = j - i;
        if d < h {
            m.bands[(i - 1) * h + d] = v.ln_1p();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log1p_values() {
        let e = std::f64::consts::E;
        let c = ContactMatrix::from_triplets(2, &[(1, 1, 0.0), (1, 2, e - 1.0)]).unwrap();
        let m = build_hic_log(&c, 2).unwrap();
        assert_eq!(m.get(0, 0), 0.0);
        assert!((m.get(0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_pair() {
        let c = ContactMatrix::from_triplets(3, &[(1, 2, 3.0)]).unwrap();
        let m = build_hic_log(&c, 2).unwrap();
        assert_eq!(m.get(0, 1), 4.0f64.ln());
        assert_eq!(m.diagonal(0), vec![0.0, 0.0, 0.0]);
        assert_eq!(m.get(1, 2), 0.0);
    }

    #[test]
    fn out_of_band_dropped() {
        let c = ContactMatrix::from_triplets(3, &[(3, 1, 5.0)]).unwrap();
        let m = build_hic_log(&c, 2).unwrap();
        assert_eq!(m, BandMatrix::zeros(3, 2).unwrap());
    }

    #[test]
    fn negative_count_rejected() {
        assert!(matches!(
            ContactMatrix::from_triplets(2, &[(1, 2, -1.0)]),
            Err(Error::NegativeCount { i: 1, j: 2, .. })
        ));
        assert!(matches!(
            ContactMatrix::<f64>::from_triplets(2, &[(1, 3, 1.0)]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
