use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid group presentation: {0}")]
    InvalidGroup(String),

    #[error("generated cone contains a line")]
    NotStronglyConvex,

    #[error("cones {0} and {1} meet in a set that is not a common face")]
    OverlappingCones(String, String),

    #[error("cone {0} is not in the fan")]
    ConeNotInFan(String),

    #[error("not a fan morphism: {0}")]
    NotAFanMorphism(String),

    #[error("incompatible beta: {0}")]
    IncompatibleBeta(String),

    #[error("not convertible: {0}")]
    NotConvertible(String),

    #[error("source fan is not smooth and complete")]
    SourceNotSmoothComplete,

    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("Euler integral is not fiber-finite: {0}")]
    NotFiberFinite(String),

    #[error("arrangement exceeds the cell budget of {limit} cells (raise CCC_MAX_CELLS)")]
    CellLimitExceeded { limit: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
