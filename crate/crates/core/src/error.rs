use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("zero vector has no associated ray")]
    ZeroVector,

    #[error("matrix is not Hermitian: |M - M^H| = {deviation:e} at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("degenerate spectrum: eigenvalue gap {gap:e} between levels {lower} and {upper} is below tolerance {tolerance:e}")]
    DegenerateSpectrum { lower: usize, upper: usize, gap: f64, tolerance: f64 },

    #[error("negative dispersion {0:e} beyond round-off")]
    NegativeDispersion(f64),

    #[error("projector invariant violated: {0}")]
    InvalidProjector(String),

    #[error("metric is singular or not positive-definite at {point:?}")]
    SingularMetric { point: Vec<f64> },

    #[error("finite-difference stencil leaves the chart domain at {point:?}")]
    ChartBoundary { point: Vec<f64> },

    #[error("profile is not positive: rho({z}) = {value}")]
    NonPositiveProfile { z: f64, value: f64 },

    #[error("index out of range: {index} >= {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("sphere indices must satisfy i > j, got i = {i}, j = {j}")]
    InvalidPair { i: usize, j: usize },

    #[error("pressure gradient routes disagree: |dp# + nabla_X X| = {mismatch:e} > {tolerance:e}")]
    GradientMismatch { mismatch: f64, tolerance: f64 },

    #[error("invalid spin wavefunction: {0}")]
    InvalidWaveFunction(String),

    #[error("SU(2) element is not unitary: deviation {0:e}")]
    NotUnitary(f64),

    #[error("point {point} is within {distance:e} of a zero of the wavefunction")]
    NearZero { point: String, distance: f64 },

    #[error("contour passes within {distance:e} of the root at {root}")]
    ContourTooClose { root: String, distance: f64 },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("root clustering is ambiguous near {center}: {fine} clusters at the fine radius, {coarse} at the coarse radius")]
    AmbiguousClustering { center: String, fine: usize, coarse: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigendecomposition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
