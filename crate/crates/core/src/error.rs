use thiserror::Error;

/// Errors raised by the fusion frame library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("every column of the spanning set is numerically zero")]
    AllZero,
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {threshold:.3e})")]
    NotHermitian { asymmetry: f64, threshold: f64 },
    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty list where at least one element is required")]
    EmptyList,
    #[error("operator is singular (numerical rank {rank} < {dim})")]
    SingularOperator { rank: usize, dim: usize },
    #[error("the zero subspace is not allowed")]
    ZeroSubspace,
    #[error("weight {index} must be finite and positive, got {value}")]
    InvalidWeight { index: usize, value: f64 },
    #[error("coefficient array has {found} blocks, frame has {expected}")]
    BlockCountMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("the family is not a fusion frame (subspaces do not span the ambient space)")]
    NotFusionFrame,
    #[error("the fusion frame is not a fusion Riesz basis")]
    NotRieszBasis,
    #[error("component {index} collapses to the zero subspace")]
    DegenerateSubspace { index: usize },
    #[error("block {index} is not a positive multiple of an orthogonal projection: {reason}")]
    NotScaledProjector { index: usize, reason: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("local frame {index} has {left} vectors on one side and {right} on the other")]
    LocalSizeMismatch { index: usize, left: usize, right: usize },
    #[error("invalid frame bounds A={lower}, B={upper}")]
    InvalidBounds { lower: f64, upper: f64 },
    #[error("incompatible Gabor lattice: {0}")]
    IncompatibleLattice(String),
    #[error("bad wavelet depth: {0}")]
    BadDepth(String),
    #[error("bad wavelet filters: {0}")]
    BadFilters(String),
    #[error("bad region grid: {0}")]
    BadGrid(String),
    #[error("region {index} captures no atoms")]
    EmptyRegion { index: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = FusionError> = std::result::Result<T, E>;
