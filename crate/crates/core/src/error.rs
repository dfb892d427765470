use thiserror::Error;

use crate::report::RelationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{n} exceeds the size bound {bound}")]
    FieldTooLarge { p: u64, n: u32, bound: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map is not well defined: column {column} times {order} is not zero in the target")]
    NotWellDefined { column: usize, order: u64 },
    #[error("subgroups live in different ambient groups")]
    MixedAmbients,
    #[error("endomorphism is not invertible: {0}")]
    NotInvertible(String),
    #[error("relation check failed: {}", .0.summary())]
    RelationsFailed(Box<RelationReport>),
    #[error("hypothesis not met for {check}: {reason}")]
    Hypothesis { check: String, reason: String },
    #[error("consistency failure in {check}: {reason}")]
    Inconsistent { check: String, reason: String },
    #[error("unknown set name `{0}`")]
    UnknownSet(String),
    #[error("enumeration bound exceeded: group of order {order} above bound {bound}")]
    BoundExceeded { order: u128, bound: u128 },
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("malformed input at {pointer}: {reason}")]
    Malformed { pointer: String, reason: String },
}

impl Error {
    pub(crate) fn hypothesis(check: &str, reason: impl Into<String>) -> Self {
        Error::Hypothesis { check: check.to_string(), reason: reason.into() }
    }

    pub(crate) fn inconsistent(check: &str, reason: impl Into<String>) -> Self {
        Error::Inconsistent { check: check.to_string(), reason: reason.into() }
    }

    pub(crate) fn malformed(pointer: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Malformed { pointer: pointer.into(), reason: reason.into() }
    }
}
