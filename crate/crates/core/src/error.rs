use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expectation value has imaginary residue {residual:.3e} (tolerance 1e-8); matrix is not Hermitian")]
    NonHermitian { residual: f64 },

    #[error("fidelity denominator vanishes; an input density matrix is identically zero")]
    ZeroDensityMatrix,

    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    #[error("state norm deviates from 1 by {0:.3e} (tolerance 1e-12)")]
    NotNormalized(f64),

    #[error("invalid canonical coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("noise calibration failed: target fidelity {target}, best achieved {achieved}")]
    NoiseCalibration { target: f64, achieved: f64 },

    #[error("{}: malformed header (expected `{expected_prefix}...`)", path.display())]
    MalformedHeader { path: PathBuf, expected_prefix: String },

    #[error("{}:{line}: expected {expected} columns, found {found}", path.display())]
    ColumnCount {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{}:{line}: column `{column}`: cannot parse `{token}` as a number", path.display())]
    NonNumeric {
        path: PathBuf,
        line: usize,
        column: String,
        token: String,
    },

    #[error("{}:{line}: {msg}", path.display())]
    InvalidRecord {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("ANOVA needs at least 2 groups with 2 samples each and n > k; {0}")]
    AnovaGroups(String),

    #[error("top-N selection out of range: N = {n}, features = {total}")]
    TopNOutOfRange { n: usize, total: usize },

    #[error("feature ranking is not a valid descending permutation of 0..{expected}")]
    InvalidRanking { expected: usize },

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("empty validation set")]
    EmptyValidationSet,

    #[error("k = {k} exceeds training-set size {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("Minkowski order must be 1 or 2, got {0}")]
    BadMinkowskiOrder(u8),

    #[error("class {class} has no training samples")]
    MissingClass { class: usize },

    #[error("evaluation set must have exactly {expected} states per class; class {class} has {found}")]
    ClassCount {
        class: String,
        expected: usize,
        found: usize,
    },

    #[error("cannot sample {requested} distinct split combinations (space holds {available})")]
    SplitSpace { requested: usize, available: usize },

    #[error("empty confusion matrix")]
    EmptyConfusion,

    #[error("no results to report")]
    EmptyResults,

    #[error("model file {}:{line}: {msg}", path.display())]
    ModelFormat {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
