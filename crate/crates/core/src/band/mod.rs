//! Banded symmetric similarity matrices.
//!
//! A [`BandMatrix`] of size `p` and bandwidth `h` stores `s[i][j]` for
//! `0 <= j - i < h` only; every entry with `|i - j| >= h` is an implicit zero.
//! Storage is diagonal-major: row `i` holds `h` consecutive values
//! `s[i][i], s[i][i+1], ..., s[i][i+h-1]`, zero-padded past column `p - 1`.

mod genotype;
mod hic;

pub use genotype::{build_ld_r2, GenotypeMatrix};
pub use hic::{build_hic_log, ContactMatrix};

use std::collections::HashMap;

use log::warn;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix<T> {
    p: usize,
    h: usize,
    bands: Vec<T>,
}

/// Options for [`BandMatrix::from_dense`].
#[derive(Clone, Copy, Debug)]
pub struct DenseOptions<T> {
    /// Replace `s[i][j]` and `s[j][i]` by their mean instead of rejecting asymmetry.
    pub symmetrize: bool,
    /// Relative tolerance for the symmetry check (and for `strict`).
    pub tol: T,
    /// Reject non-negligible entries outside the band instead of dropping them.
    pub strict: bool,
}

impl<T: Scalar> Default for DenseOptions<T> {
    fn default() -> Self {
        Self {
            symmetrize: false,
            tol: T::from_f64_lossy(1e-12),
            strict: false,
        }
    }
}

impl<T: Scalar> BandMatrix<T> {
    /// All-zero band matrix.
    pub fn zeros(p: usize, h: usize) -> Result<Self> {
        check_dims(p, h)?;
        Ok(Self {
            p,
            h,
            bands: vec![T::zero(); p * h],
        })
    }

    pub fn identity(p: usize, h: usize) -> Result<Self> {
        let mut m = Self::zeros(p, h)?;
        for i in 0..p {
            m.bands[i * h] = T::one();
        }
        Ok(m)
    }

    /// Builds a band matrix from its `h` stored diagonals.
    ///
    /// `diagonals[d]` holds `s[i][i + d]` for `i in 0..p - d`.
    pub fn from_diagonals(diagonals: &[Vec<T>]) -> Result<Self> {
        let p = diagonals.first().map_or(0, Vec::len);
        let h = diagonals.len();
        let mut m = Self::zeros(p, h)?;
        for (d, diag) in diagonals.iter().enumerate() {
            if diag.len() != p - d.min(p) {
                return Err(Error::NotSquare {
                    row: d,
                    len: diag.len(),
                    expected: p - d.min(p),
                });
            }
            for (i, &v) in diag.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j: i + d });
                }
                m.bands[i * h + d] = v;
            }
        }
        Ok(m)
    }

    /// Copies the band of a dense `p x p` array.
    ///
    /// Entries with `|i - j| >= h` are discarded, or rejected when
    /// `opts.strict` is set and they exceed `opts.tol` in magnitude.
    #[allow(clippy::needless_range_loop)]
    pub fn from_dense(values: &[Vec<T>], h: usize, opts: DenseOptions<T>) -> Result<Self> {
        let p = values.len();
        if p == 0 {
            return Err(Error::Empty);
        }
        for (row, r) in values.iter().enumerate() {
            if r.len() != p {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: p,
                });
            }
            if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { i: row, j });
            }
        }
        check_dims(p, h)?;
        let half = T::from_f64_lossy(0.5);
        for i in 0..p {
            for j in i + 1..p {
                let (a, b) = (values[i][j], values[j][i]);
                if !opts.symmetrize && (a - b).abs() > opts.tol * a.abs().max(T::one()) {
                    return Err(Error::Asymmetric {
                        i,
                        j,
                        a: a.to_f64_lossy(),
                        b: b.to_f64_lossy(),
                    });
                }
                if opts.strict && j - i >= h {
                    let v = if opts.symmetrize { (a + b) * half } else { a };
                    if v.abs() > opts.tol {
                        return Err(Error::OutsideBand {
                            i,
                            j,
                            value: v.to_f64_lossy(),
                            h,
                        });
                    }
                }
            }
        }
        let mut m = Self::zeros(p, h)?;
        for i in 0..p {
            for d in 0..h.min(p - i) {
                let j = i + d;
                m.bands[i * h + d] = if opts.symmetrize && d > 0 {
                    (values[i][j] + values[j][i]) * half
                } else {
                    values[i][j]
                };
            }
        }
        Ok(m)
    }

    /// Builds a band matrix from 1-based `(i, j, value)` triplets.
    ///
    /// Unset entries are zero. A pair may be given as `(i, j)`, `(j, i)` or
    /// both, in which case the two values must be equal. Triplets outside the
    /// band are dropped when `drop_outside` is set and rejected otherwise.
    pub fn from_coo(
        triplets: &[(usize, usize, T)],
        p: usize,
        h: usize,
        drop_outside: bool,
    ) -> Result<Self> {
        check_dims(p, h)?;
        let mut seen: HashMap<(usize, usize), (T, bool)> = HashMap::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i == 0 || j == 0 || i > p || j > p {
                return Err(Error::IndexOutOfRange { i, j, p });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { i, j });
            }
            let key = (i.min(j), i.max(j));
            let upper = i <= j;
            match seen.get(&key) {
                None => {
                    seen.insert(key, (v, upper));
                }
                // the same orientation twice is always a duplicate; the mirror
                // orientation is accepted when it carries the same value
                Some(&(prev, prev_upper)) => {
                    if prev_upper == upper || prev != v || i == j {
                        return Err(Error::Duplicate { i, j });
                    }
                }
            }
        }
        let mut m = Self::zeros(p, h)?;
        let mut diag_set = 0usize;
        for (&(i, j), &(v, _)) in &seen {
            let d = j - i;
            if d >= h {
                if drop_outside {
                    continue;
                }
                return Err(Error::OutsideBand {
                    i,
                    j,
                    value: v.to_f64_lossy(),
                    h,
                });
            }
            if d == 0 {
                diag_set += 1;
            }
            m.bands[(i - 1) * h + d] = v;
        }
        if diag_set < p {
            warn!(
                "{} of {} diagonal entries missing from COO input, set to 0",
                p - diag_set,
                p
            );
        }
        Ok(m)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Entry `s[i][j]` (0-based); zero outside the band.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let d = b - a;
        if d >= self.h || b >= self.p {
            T::zero()
        } else {
            self.bands[a * self.h + d]
        }
    }

    /// Stored row `i`: `s[i][i..i + h]`, zero-padded at the right edge.
    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.bands[i * self.h..(i + 1) * self.h]
    }

    /// The `d`-th superdiagonal, `s[i][i + d]` for `i in 0..p - d`.
    pub fn diagonal(&self, d: usize) -> Vec<T> {
        if d >= self.h {
            return vec![T::zero(); self.p.saturating_sub(d)];
        }
        (0..self.p - d)
            .map(|i| self.bands[i * self.h + d])
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.p)
            .map(|i| (0..self.p).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Upper-band entries as 1-based `(i, j, value)` triplets, `i <= j`, in row order.
    pub fn to_coo(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for i in 0..self.p {
            for d in 0..self.h.min(self.p - i) {
                out.push((i + 1, i + d + 1, self.bands[i * self.h + d]));
            }
        }
        out
    }

    /// Returns `S + lambda * I`.
    pub fn shift_diagonal(&self, lambda: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.p {
            m.bands[i * self.h] = m.bands[i * self.h] + lambda;
        }
        m
    }

    /// Same matrix restricted to a narrower band.
    pub fn with_bandwidth(&self, h: usize) -> Result<Self> {
        check_dims(self.p, h)?;
        let mut m = Self::zeros(self.p, h)?;
        for i in 0..self.p {
            for d in 0..h.min(self.h).min(self.p - i) {
                m.bands[i * h + d] = self.bands[i * self.h + d];
            }
        }
        Ok(m)
    }

    /// Matrix with the object order reversed: `s'[i][j] = s[p-1-i][p-1-j]`.
    pub fn reversed(&self) -> Self {
        let (p, h) = (self.p, self.h);
        let mut m = Self {
            p,
            h,
            bands: vec![T::zero(); p * h],
        };
        for i in 0..p {
            for d in 0..h.min(p - i) {
                // s[i][i+d] moves to s'[p-1-i-d][p-1-i]
                m.bands[(p - 1 - i - d) * h + d] = self.bands[i * h + d];
            }
        }
        m
    }
}

fn check_dims(p: usize, h: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::Empty);
    }
    if h == 0 || h > p {
        return Err(Error::Bandwidth { h, p });
    }
    Ok(())
}
