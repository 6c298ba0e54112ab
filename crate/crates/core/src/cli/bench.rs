//! Timing runs on random band matrices.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::band::BandMatrix;
use crate::engine::cluster_with_stats;
use crate::oracle::{cluster_naive, DenseSimilarity};

/// Symmetric random band matrix with in-band entries uniform on `[0, 1)` and a
/// strictly dominant diagonal, hence positive definite.
pub fn random_band_matrix<R: Rng>(p: usize, h: usize, rng: &mut R) -> BandMatrix<f64> {
    let mut diagonals: Vec<Vec<f64>> = (0..h)
        .map(|d| (0..p - d).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let mut row_sums = vec![0.0; p];
    for (d, diag) in diagonals.iter().enumerate().skip(1) {
        for (i, &v) in diag.iter().enumerate() {
            row_sums[i] += v;
            row_sums[i + d] += v;
        }
    }
    for (s, r) in diagonals[0].iter_mut().zip(row_sums) {
        *s = 1.0 + r;
    }
    BandMatrix::from_diagonals(&diagonals).expect("valid dimensions")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchEngine {
    Fast,
    Naive,
}

impl BenchEngine {
    pub fn name(self) -> &'static str {
        match self {
            BenchEngine::Fast => "fast",
            BenchEngine::Naive => "naive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub p: usize,
    pub h: usize,
    pub engine: BenchEngine,
    /// Median over repetitions, seconds.
    pub wall_time_s: f64,
    pub peak_entries: usize,
    pub heap_max: usize,
}

impl BenchRow {
    pub const HEADER: &'static str = "p,h,engine,wall_time_s,peak_entries,heap_max";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{}",
            self.p,
            self.h,
            self.engine.name(),
            self.wall_time_s,
            self.peak_entries,
            self.heap_max
        )
    }
}

/// Times one `(p, h)` cell. Matrix generation is not timed; pencil
/// precomputation is. `h` is capped at `p`.
pub fn bench_cell(p: usize, h: usize, engine: BenchEngine, reps: usize, seed: u64) -> BenchRow {
    let h = h.min(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((p as u64) << 32) ^ h as u64);
    let mut times = Vec::with_capacity(reps);
    let (mut peak_entries, mut heap_max) = (0, 0);
    for _ in 0..reps {
        let m = random_band_matrix(p, h, &mut rng);
        let t0 = Instant::now();
        match engine {
            BenchEngine::Fast => {
                let (d, stats) = cluster_with_stats(&m);
                std::hint::black_box(d);
                peak_entries = stats.pencil_entries;
                heap_max = stats.heap_max_len;
            }
            BenchEngine::Naive => {
                let dense = DenseSimilarity::from_band(&m);
                std::hint::black_box(cluster_naive(&dense));
                peak_entries = p * p;
            }
        }
        times.push(t0.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    BenchRow {
        p,
        h,
        engine,
        wall_time_s: times[times.len() / 2],
        peak_entries,
        heap_max,
    }
}
