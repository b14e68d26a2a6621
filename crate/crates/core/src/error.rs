use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QgemError {
    #[error("matrix contains non-finite entries")]
    InvalidMatrix,
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("degenerate geometry: zero distance between qubits {first} and {second}")]
    DegenerateGeometry { first: usize, second: usize },
    #[error(
        "unphysical geometry: negative distance {distance:e} m between qubits {first} and {second} \
         (enable unphysical mode to evaluate it formally)"
    )]
    UnphysicalGeometry {
        first: usize,
        second: usize,
        distance: f64,
    },
    #[error("phase set does not match the {setup} degeneracy pattern")]
    DegeneracyViolation { setup: String },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("numerical consistency failure: {0}")]
    NumericalConsistency(String),
    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),
    #[error("predicate does not hold at gamma = 0")]
    NoDetectionAtZero,
    #[error("predicate is not monotone over the sampled gamma grid: {samples:?}")]
    NonMonotonePredicate { samples: Vec<(f64, bool)> },
}

impl QgemError {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            QgemError::NoConvergence { .. } | QgemError::NumericalConsistency(_)
        )
    }

    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        QgemError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, QgemError>;
