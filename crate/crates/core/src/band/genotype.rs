use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::BandMatrix;

/// Allele dosages for `n` samples at `p` loci; `None` marks a missing call.
#[derive(Clone, Debug, PartialEq)]
pub struct GenotypeMatrix {
    n: usize,
    p: usize,
    /// Sample-major, `dosages[s * p + locus]`.
    dosages: Vec<Option<u8>>,
}

impl GenotypeMatrix {
    /// `rows[s][l]` is the dosage of sample `s` at locus `l`.
    pub fn new(rows: Vec<Vec<Option<u8>>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        let p = rows[0].len();
        if p == 0 {
            return Err(Error::Empty);
        }
        let mut dosages = Vec::with_capacity(n * p);
        for (s, row) in rows.into_iter().enumerate() {
            if row.len() != p {
                return Err(Error::NotSquare {
                    row: s,
                    len: row.len(),
                    expected: p,
                });
            }
            for (l, d) in row.into_iter().enumerate() {
                if let Some(v) = d {
                    if v > 2 {
                        return Err(Error::InvalidDosage {
                            sample: s,
                            locus: l,
                            value: f64::from(v),
                        });
                    }
                }
                dosages.push(d);
            }
        }
        Ok(Self { n, p, dosages })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, sample: usize, locus: usize) -> Option<u8> {
        self.dosages[sample * self.p + locus]
    }
}

/// Banded LD similarity: squared Pearson correlation of dosages.
///
/// Each in-band pair uses the samples observed at both loci. A locus with
/// zero variance over those samples has similarity 0 with the other locus.
/// The diagonal is 1.
pub fn build_ld_r2<T: Scalar>(g: &GenotypeMatrix, h: usize) -> Result<BandMatrix<T>> {
    let p = g.p();
    let mut m = BandMatrix::zeros(p, h)?;
    let columns: Vec<Vec<Option<u8>>> = (0..p)
        .map(|l| (0..g.n()).map(|s| g.get(s, l)).collect())
        .collect();
    for i in 0..p {
        m.bands[i * h] = T::one();
        for d in 1..h.min(p - i) {
            let j = i + d;
            let r2 = pairwise_r2(&columns[i], &columns[j])
                .ok_or(Error::InsufficientPairs { i: i + 1, j: j + 1 })?;
            m.bands[i * h + d] = T::from_f64_lossy(r2);
        }
    }
    Ok(m)
}

/// `None` when fewer than two samples are observed at both loci.
fn pairwise_r2(x: &[Option<u8>], y: &[Option<u8>]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter_map(|(a, b)| Some((f64::from((*a)?), f64::from((*b)?))))
        .collect();
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Some(0.0);
    }
    Some((sxy * sxy / (sxx * syy)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_columns(cols: &[&[u8]]) -> GenotypeMatrix {
        let n = cols[0].len();
        let rows = (0..n)
            .map(|s| cols.iter().map(|c| Some(c[s])).collect())
            .collect();
        GenotypeMatrix::new(rows).unwrap()
    }

    #[test]
    fn identical_columns() {
        let g = from_columns(&[&[0, 1, 2, 1], &[0, 1, 2, 1]]);
        let m: BandMatrix<f64> = build_ld_r2(&g, 2).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.diagonal(0), vec![1.0, 1.0]);
    }

    #[test]
    fn uncorrelated_columns() {
        let g = from_columns(&[&[0, 0, 2, 2], &[0, 2, 0, 2]]);
        let m: BandMatrix<f64> = build_ld_r2(&g, 2).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
    }

    #[test]
    fn anticorrelated_columns() {
        let g = from_columns(&[&[0, 1, 2], &[2, 1, 0]]);
        let m: BandMatrix<f64> = build_ld_r2(&g, 2).unwrap();
        assert!((m.get(0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_locus_is_zero() {
        let g = from_columns(&[&[1, 1, 1], &[0, 1, 2]]);
        let m: BandMatrix<f64> = build_ld_r2(&g, 2).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn missing_data_uses_complete_pairs() {
        let rows = vec![
            vec![Some(0), Some(0)],
            vec![Some(1), None],
            vec![Some(2), Some(2)],
            vec![None, Some(1)],
        ];
        let g = GenotypeMatrix::new(rows).unwrap();
        let m: BandMatrix<f64> = build_ld_r2(&g, 2).unwrap();
        assert!((m.get(0, 1) - 1.0).abs() < 1e-15);

        let sparse = vec![
            vec![Some(0), None],
            vec![None, Some(1)],
            vec![Some(1), Some(1)],
        ];
        let g = GenotypeMatrix::new(sparse).unwrap();
        assert!(matches!(
            build_ld_r2::<f64>(&g, 2),
            Err(Error::InsufficientPairs { i: 1, j: 2 })
        ));
        // out-of-band pairs are never evaluated
        assert!(build_ld_r2::<f64>(&g, 1).is_ok());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            GenotypeMatrix::new(vec![vec![Some(0)]]),
            Err(Error::TooFewSamples(1))
        ));
        assert!(matches!(
            GenotypeMatrix::new(vec![vec![Some(0)], vec![Some(3)]]),
            Err(Error::InvalidDosage { .. })
        ));
    }
}
