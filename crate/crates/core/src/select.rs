//! Choosing the number of clusters from a dendrogram.
//!
//! Both rules work on the pseudo-inertia loss curve: `loss(K)` is the sum of
//! the heights of the first `p - K` merges, so `loss(p) = 0` and undoing a
//! merge lowers the loss by its height.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::warn;
use statrs::function::gamma::ln_gamma;

use crate::dendrogram::{Dendrogram, NodeRef};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `loss[K - 1]` for `K = 1..=p`.
pub fn loss_curve<T: Scalar>(d: &Dendrogram<T>) -> Vec<f64> {
    let p = d.p();
    let mut loss = vec![0.0; p];
    let heights: Vec<f64> = d.merges().iter().map(|m| m.height.to_f64_lossy()).collect();
    // loss(K) = loss(K + 1) + height of merge p - K
    for k in (1..p).rev() {
        loss[k - 1] = loss[k] + heights[p - k - 1];
    }
    loss
}

/// Expected proportions of the pieces of a stick broken at random into `n`
/// parts, largest first: `E_i = (1/n) * sum_{k=i}^{n} 1/k`.
pub fn broken_stick_expectations(n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    let mut tail = 0.0;
    for i in (1..=n).rev() {
        tail += 1.0 / i as f64;
        e[i - 1] = tail / n as f64;
    }
    e
}

/// How a split's share of dispersion is compared with the broken stick.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BrokenStickRule {
    /// The `i`-th split's share of the total dispersion against `E_i` for
    /// `n = p - 1` pieces.
    Global,
    /// The `i`-th split's share of the dispersion not yet explained against
    /// the head term `E_1` for the `n - i + 1` remaining pieces.
    #[default]
    Conditional,
}

pub fn select_broken_stick<T: Scalar>(d: &Dendrogram<T>) -> usize {
    select_broken_stick_with(d, BrokenStickRule::default())
}

/// Splits from the root, always taking the available split with the largest
/// dispersion decrease, and stops at the first split whose share falls below
/// the broken-stick expectation. Returns the number of clusters reached.
pub fn select_broken_stick_with<T: Scalar>(d: &Dendrogram<T>, rule: BrokenStickRule) -> usize {
    let decreases = split_sequence(d);
    let n = decreases.len();
    let total: f64 = decreases.iter().sum();
    if n == 0 || total <= 0.0 {
        return 1;
    }
    let mut k = 1;
    match rule {
        BrokenStickRule::Global => {
            let expected = broken_stick_expectations(n);
            for (share, e) in decreases.iter().map(|x| x / total).zip(expected) {
                if share < e {
                    break;
                }
                k += 1;
            }
        }
        BrokenStickRule::Conditional => {
            let mut remaining = total;
            for (i, &x) in decreases.iter().enumerate() {
                let pieces = n - i;
                if remaining <= 0.0 || x / remaining < broken_stick_expectations(pieces)[0] {
                    break;
                }
                remaining -= x;
                k += 1;
            }
        }
    }
    k
}

#[derive(PartialEq)]
struct ByHeight(f64, usize);

impl Eq for ByHeight {}

impl PartialOrd for ByHeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByHeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Dispersion decreases in greedy top-down split order; negative heights
/// count as zero.
fn split_sequence<T: Scalar>(d: &Dendrogram<T>) -> Vec<f64> {
    let merges = d.merges();
    if merges.is_empty() {
        return Vec::new();
    }
    let clamp = |t: usize| merges[t].height.to_f64_lossy().max(0.0);
    if merges.iter().any(|m| m.height < T::zero()) {
        warn!("negative merge heights treated as 0 for the broken-stick rule");
    }
    let mut frontier = BinaryHeap::new();
    let root = merges.len() - 1;
    frontier.push(ByHeight(clamp(root), root));
    let mut out = Vec::with_capacity(merges.len());
    while let Some(ByHeight(h, t)) = frontier.pop() {
        out.push(h);
        for child in [merges[t].left, merges[t].right] {
            if let NodeRef::Merge(c) = child {
                frontier.push(ByHeight(clamp(c), c));
            }
        }
    }
    out
}

/// `ln C(n, k)` through log-gamma.
pub fn log_binomial(n: usize, k: usize) -> f64 {
    if k == 0 || k >= n {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Penalty shape `ln C(p - 1, K - 1)`.
pub fn penalty_shape(p: usize, k: usize) -> f64 {
    log_binomial(p - 1, k - 1)
}

/// Calibration of the slope heuristic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeHeuristic {
    /// Fraction of `1..=k_max` (largest `K` first) used to fit the slope.
    pub fit_fraction: f64,
    /// Multiplier applied to the fitted minimal penalty.
    pub multiplier: f64,
}

impl Default for SlopeHeuristic {
    fn default() -> Self {
        Self {
            fit_fraction: 0.5,
            multiplier: 2.0,
        }
    }
}

/// Outcome of the slope heuristic.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub k: usize,
    /// Minimal-penalty slope, `-d loss / d shape` on the fit window, floored at 0.
    pub slope: f64,
    pub criterion: Vec<f64>,
}

pub fn select_slope_heuristic<T: Scalar>(d: &Dendrogram<T>, k_max: usize) -> Result<usize> {
    Ok(slope_heuristic(&loss_curve(d), d.p(), k_max, SlopeHeuristic::default())?.k)
}

/// Runs the slope heuristic on a loss curve (`losses[K - 1]`) for `p` objects.
pub fn slope_heuristic(
    losses: &[f64],
    p: usize,
    k_max: usize,
    params: SlopeHeuristic,
) -> Result<SlopeFit> {
    if k_max < 2 {
        return Err(Error::KMax(k_max));
    }
    if k_max > p || losses.len() < k_max {
        return Err(Error::ClusterCount { k: k_max, p });
    }
    let shape: Vec<f64> = (1..=k_max).map(|k| penalty_shape(p, k)).collect();
    let n_fit = ((params.fit_fraction * k_max as f64).ceil() as usize).clamp(2, k_max);
    let lo = k_max - n_fit;
    let raw = huber_slope(&shape[lo..k_max], &losses[lo..k_max]);
    let slope = (-raw).max(0.0);
    let criterion: Vec<f64> = (0..k_max)
        .map(|i| losses[i] + params.multiplier * slope * shape[i])
        .collect();
    let k = criterion
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, &c)| if c < best.1 { (i, c) } else { best },
        )
        .0
        + 1;
    Ok(SlopeFit {
        k,
        slope,
        criterion,
    })
}

/// Slope of a Huber M-estimate regression of `y` on `x` (IRLS, MAD scale).
fn huber_slope(x: &[f64], y: &[f64]) -> f64 {
    const TUNING: f64 = 1.345;
    let mut w = vec![1.0; x.len()];
    let Some((mut a, mut b)) = weighted_ls(x, y, &w) else {
        return 0.0;
    };
    for _ in 0..100 {
        let resid: Vec<f64> = x.iter().zip(y).map(|(&xi, &yi)| yi - a - b * xi).collect();
        let scale = mad(&resid) / 0.6745;
        if scale <= f64::EPSILON * y.iter().fold(0.0f64, |m, v| m.max(v.abs())) {
            break;
        }
        for (wi, r) in w.iter_mut().zip(&resid) {
            let u = r.abs() / (TUNING * scale);
            *wi = if u <= 1.0 { 1.0 } else { 1.0 / u };
        }
        let Some((na, nb)) = weighted_ls(x, y, &w) else {
            break;
        };
        let done = (nb - b).abs() <= 1e-12 * nb.abs().max(1e-300);
        a = na;
        b = nb;
        if done {
            break;
        }
    }
    b
}

fn weighted_ls(x: &[f64], y: &[f64], w: &[f64]) -> Option<(f64, f64)> {
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for ((&xi, &yi), &wi) in x.iter().zip(y).zip(w) {
        sxy += wi * (xi - mx) * (yi - my);
        sxx += wi * (xi - mx) * (xi - mx);
    }
    if sxx <= 0.0 {
        return None;
    }
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

fn mad(v: &[f64]) -> f64 {
    let med = median(v.to_vec());
    median(v.iter().map(|x| (x - med).abs()).collect())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
