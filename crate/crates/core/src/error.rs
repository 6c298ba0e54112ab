use thiserror::Error;

/// Errors raised while building, validating or clustering similarity data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("matrix must have at least one row")]
    Empty,

    #[error("bandwidth {h} out of range [1, {p}]")]
    Bandwidth { h: usize, p: usize },

    #[error("non-finite value at ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("asymmetric entries at ({i}, {j}): {a} vs {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },

    #[error("entry ({i}, {j}) = {value} lies outside the band of width {h}")]
    OutsideBand {
        i: usize,
        j: usize,
        value: f64,
        h: usize,
    },

    #[error("index ({i}, {j}) out of range for p = {p} (indices are 1-based)")]
    IndexOutOfRange { i: usize, j: usize, p: usize },

    #[error("conflicting duplicate entry at ({i}, {j})")]
    Duplicate { i: usize, j: usize },

    #[error("negative count {value} at ({i}, {j})")]
    NegativeCount { i: usize, j: usize, value: f64 },

    #[error("invalid dosage {value} at sample {sample}, locus {locus}")]
    InvalidDosage {
        sample: usize,
        locus: usize,
        value: f64,
    },

    #[error("genotype matrix needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("loci {i} and {j} share fewer than 2 non-missing samples")]
    InsufficientPairs { i: usize, j: usize },

    #[error("invalid cluster range {start}..{end} for p = {p}")]
    InvalidRange { start: usize, end: usize, p: usize },

    #[error("clusters {left:?} and {right:?} are not adjacent")]
    NotAdjacent {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("number of clusters {k} out of range [1, {p}]")]
    ClusterCount { k: usize, p: usize },

    #[error("dendrograms have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("invalid merge table: {0}")]
    InvalidMerges(String),

    #[error("k_max must be at least 2, got {0}")]
    KMax(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
