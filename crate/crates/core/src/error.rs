use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("curve index {index} is out of range for m = {m}")]
    CurveIndexOutOfRange { index: usize, m: usize },

    #[error("divisor has {found} exceptional coefficients, surface has m = {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cone angles must be positive")]
    NonPositiveAngle,

    #[error("class is not pseudoeffective within the candidate curve set")]
    NotPseudoeffective,

    #[error("pseudoeffective threshold is not rational")]
    IrrationalThreshold,

    #[error("log anticanonical class is not ample: {0}")]
    OutsideAmpleRange(String),

    #[error("no rational condition point: {0}")]
    NotFound(String),

    /// Two independent computations disagreed, or a certified
    /// post-condition failed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
