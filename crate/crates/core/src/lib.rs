//! Adjacency-constrained hierarchical clustering with Ward linkage on banded
//! similarity matrices.
//!
//! Objects `0..p` have a fixed order and only neighbouring clusters may
//! merge, so every cluster is an interval. When the similarity vanishes
//! beyond a bandwidth `h`, precomputed pencil sums give each Ward linkage in
//! O(1) and a min-heap of candidate fusions yields the full hierarchy in
//! O(ph + p log p) time and O(ph) space.
//!
//! ```
//! use bandclust::{cluster, BandMatrix64, DenseOptions};
//!
//! let s = vec![
//!     vec![1.0, 0.5, 0.0],
//!     vec![0.5, 1.0, 0.2],
//!     vec![0.0, 0.2, 1.0],
//! ];
//! let m = BandMatrix64::from_dense(&s, 2, DenseOptions::default()).unwrap();
//! let d = cluster(&m);
//! assert_eq!(d.len(), 2);
//! assert!((d.heights()[0] - 0.5).abs() < 1e-12);
//! assert_eq!(d.cut(2).unwrap().labels(), &[1, 1, 2]);
//! ```
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases fix the common case.

pub mod band;
pub mod cli;
pub mod compare;
pub mod dendrogram;
pub mod engine;
mod error;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod pencil;
mod scalar;
pub mod select;

pub use band::{
    build_hic_log, build_ld_r2, BandMatrix, ContactMatrix, DenseOptions, GenotypeMatrix,
};
pub use compare::{adjusted_rand, bakers_gamma, first_difference_index, rand_index};
pub use dendrogram::{Dendrogram, Merge, NodeRef};
pub use engine::{cluster, cluster_shifted, cluster_with_stats, RunStats};
pub use error::{Error, Result};
pub use oracle::{cluster_naive, euclidean_ward_check, DenseSimilarity};
pub use partition::Partition;
pub use pencil::PencilTable;
pub use scalar::{Compensated, Scalar};
pub use select::{select_broken_stick, select_slope_heuristic};

pub type BandMatrix64 = BandMatrix<f64>;
pub type BandMatrix32 = BandMatrix<f32>;
pub type PencilTable64 = PencilTable<f64>;
pub type Dendrogram64 = Dendrogram<f64>;
pub type ContactMatrix64 = ContactMatrix<f64>;
pub type DenseSimilarity64 = DenseSimilarity<f64>;
