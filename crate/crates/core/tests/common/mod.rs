//! Matrix generators and brute-force references shared by the test targets.

#![allow(dead_code)]

use bandclust::{BandMatrix64, Dendrogram64};
use rand::Rng;

/// Symmetric band matrix, off-diagonal entries uniform on `[-1, 1)`, diagonal on `[0, 2)`.
pub fn signed_band<R: Rng>(p: usize, h: usize, rng: &mut R) -> BandMatrix64 {
    let diagonals: Vec<Vec<f64>> = (0..h)
        .map(|d| {
            (0..p - d)
                .map(|_| {
                    if d == 0 {
                        rng.gen_range(0.0..2.0)
                    } else {
                        rng.gen_range(-1.0..1.0)
                    }
                })
                .collect()
        })
        .collect();
    BandMatrix64::from_diagonals(&diagonals).unwrap()
}

/// Symmetric band matrix with every entry uniform on `[0, 1)`.
pub fn positive_band<R: Rng>(p: usize, h: usize, rng: &mut R) -> BandMatrix64 {
    let diagonals: Vec<Vec<f64>> = (0..h)
        .map(|d| (0..p - d).map(|_| rng.gen::<f64>()).collect())
        .collect();
    BandMatrix64::from_diagonals(&diagonals).unwrap()
}

/// Block-diagonal similarity: `within` inside blocks, 0 across, 1 on the diagonal.
pub fn block_matrix(sizes: &[usize], within: f64) -> BandMatrix64 {
    let p: usize = sizes.iter().sum();
    let mut block = Vec::with_capacity(p);
    for (b, &n) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(b, n));
    }
    let diagonals: Vec<Vec<f64>> = (0..p)
        .map(|d| {
            (0..p - d)
                .map(|i| match d {
                    0 => 1.0,
                    _ if block[i] == block[i + d] => within,
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    BandMatrix64::from_diagonals(&diagonals).unwrap()
}

/// Neumaier-compensated sum of `s[a][b]` over `a, b` in `rows x cols` with `|a - b| < l`.
pub fn brute_sum(m: &BandMatrix64, rows: std::ops::Range<usize>, l: usize) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for a in rows.clone() {
        for b in rows.clone() {
            if a.abs_diff(b) >= l {
                continue;
            }
            let x = m.get(a, b);
            let t = sum + x;
            if sum.abs() >= x.abs() {
                c += (sum - t) + x;
            } else {
                c += (x - t) + sum;
            }
            sum = t;
        }
    }
    sum + c
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn merge_pairs(d: &Dendrogram64) -> Vec<(i64, i64)> {
    d.merges()
        .iter()
        .map(|m| (m.left.to_signed(), m.right.to_signed()))
        .collect()
}
