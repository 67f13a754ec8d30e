//! Error type shared by all matrix, norm, and check routines.

/// Errors produced by construction, validation, and numerical preconditions.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.6e} below clamp threshold {threshold:.3e})")]
    NotPsd { min_eigenvalue: f64, threshold: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("invalid entries: {context}")]
    NonFinite { context: String },
    #[error("bad weights: {context}")]
    BadWeights { context: String },
    #[error("bad scalar bounds: {context}")]
    BadBounds { context: String },
    #[error("operator {index} violates its scalar bounds [{lower}, {upper}] (spectrum [{min_eig:.6e}, {max_eig:.6e}])")]
    BoundsViolated {
        index: usize,
        lower: f64,
        upper: f64,
        min_eig: f64,
        max_eig: f64,
    },
    #[error("invalid Schatten order: {context}")]
    InvalidOrder { context: String },
    #[error("operation requires a finite Schatten order: {context}")]
    UnsupportedOrder { context: String },
    #[error("norm is not Q-norm eligible (requires p = inf or p >= 2, got p = {p})")]
    IneligibleQNorm { p: f64 },
    #[error("vectors {i} and {j} are not orthogonal (|<e_i,e_j>| = {overlap:.3e} exceeds {tolerance:.3e})")]
    NotOrthogonal {
        i: usize,
        j: usize,
        overlap: f64,
        tolerance: f64,
    },
    #[error("vector {index} is zero")]
    ZeroVector { index: usize },
    #[error("operators {i} and {j} are not mutually orthogonal (|A_i* A_j| = {cross_norm:.3e} exceeds {tolerance:.3e})")]
    NotOrthogonalFamily {
        i: usize,
        j: usize,
        cross_norm: f64,
        tolerance: f64,
    },
    #[error("field evaluator changed dimensions (expected {expected_rows}x{expected_cols}, got {rows}x{cols} at t = {t})")]
    EvaluatorDimensionDrift {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
        t: f64,
    },
    #[error("density is negative at t = {t} (value {value:.6e})")]
    NegativeDensity { t: f64, value: f64 },
    #[error("bad quadrature nodes: {context}")]
    BadNodes { context: String },
    #[error("bad trial configuration: {context}")]
    BadConfig { context: String },
    #[error("bad field domain: {context}")]
    BadDomain { context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
