use fusionframe_core::FusionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent input.
    #[error("input error: {0}")]
    Input(String),
    /// Valid input violating a mathematical precondition.
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 3,
        }
    }

    pub fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{context}: {err}"))
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        use FusionError::*;
        match e {
            Parse(_)
            | DimensionMismatch { .. }
            | ShapeMismatch(_)
            | BlockCountMismatch { .. }
            | IndexOutOfRange { .. }
            | EmptyList
            | InvalidWeight { .. }
            | InvalidTolerance(_)
            | IncompatibleLattice(_)
            | BadDepth(_)
            | BadFilters(_)
            | BadGrid(_)
            | NotHermitian { .. }
            | LocalSizeMismatch { .. }
            | InvalidBounds { .. } => CliError::Input(e.to_string()),
            AllZero
            | NotPositiveDefinite { .. }
            | SingularOperator { .. }
            | ZeroSubspace
            | NotFusionFrame
            | NotRieszBasis
            | DegenerateSubspace { .. }
            | NotScaledProjector { .. }
            | PreconditionFailed(_)
            | EmptyRegion { .. } => CliError::Math(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
