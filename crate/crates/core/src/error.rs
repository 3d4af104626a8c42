use thiserror::Error;

use crate::qtorus::ExpVec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("exact division failed: {0}")]
    NotDivisible(String),

    #[error("matrix shape error: {0}")]
    Shape(String),

    #[error("vertex {0} is not an unfrozen vertex")]
    NotUnfrozen(usize),

    #[error("vertex index {0} out of range")]
    BadVertex(usize),

    #[error("mutation produced an inconsistent seed: {0}")]
    IncompatibleResult(String),

    #[error("vector {0} is not supported on the unfrozen vertices")]
    SupportViolation(ExpVec),

    #[error("exchange matrix does not have full column rank")]
    NotFullRank,

    #[error("no compatible Lambda found with diagonal entries up to {0}")]
    NoneFound(i64),

    #[error("zero element has no degree or codegree")]
    ZeroInput,

    #[error("support has no unique maximal element")]
    NoDegree,

    #[error("support has no unique minimal element")]
    NoCodegree,

    #[error("extremal coefficient {0} is not a unit")]
    NonUnitLeading(String),

    #[error("cluster monomial exponent {0} is negative on an unfrozen vertex")]
    ExponentSign(ExpVec),

    #[error("shifted seed not found: {0}")]
    NotFound(String),

    #[error("frozen factor {0} has unfrozen support")]
    FrozenFactorNotFrozen(ExpVec),

    #[error("two distinct basis elements share the degree {degree}: {witnesses:?}")]
    DuplicateDegreeConflict {
        degree: ExpVec,
        witnesses: Vec<String>,
    },

    #[error("exchange graph is truncated (node cap {0}); not finite type within cap")]
    Truncated(usize),

    #[error("expansion unavailable: {0}")]
    ExpansionUnavailable(String),
}
