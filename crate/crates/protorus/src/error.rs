use thiserror::Error;

/// Errors shared across the exact and spectral layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero symbolic scalar")]
    DivisionByZeroScalar,

    #[error("generator `{0}` has no numeric anchor")]
    MissingAnchor(String),

    #[error("interval evaluation undefined: denominator not separated from zero at refinement budget")]
    IntervalUndefined,

    #[error("sign undecided at refinement budget")]
    UndecidedSign,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Pfaffian requires an even-size index subset")]
    OddSubset,

    #[error("matrix does not have full column rank")]
    NotFullColumnRank,

    #[error("stage {stage} exceeds horizon {horizon}")]
    HorizonExceeded { stage: usize, horizon: usize },

    #[error("same-dimensional proper toric map requires |det M| > 1")]
    DeterminantNotProper,

    #[error("corner trace must be strictly positive and at most 1")]
    NonPositiveTrace,

    #[error("congruence fails at entry ({0},{1})")]
    CongruenceFails(usize, usize),

    #[error("degenerate skew form refused: {0}")]
    DegenerateForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed to converge within the sweep cap")]
    NoConvergence,

    #[error("flat multiplier matrix is singular or ill-conditioned")]
    SingularL,

    #[error("weight sequence not declared proper (must increase to infinity)")]
    NonProperWeights,

    #[error("operation requires a certified ball oracle")]
    UncertifiedBall,

    #[error("intertwiner is not an isometry (columns not orthonormal)")]
    NonIsometry,

    #[error("truncation too small: boundary margin exceeds the block")]
    TruncationTooSmall,

    #[error("config error: {0}")]
    ConfigParse(String),
}
