use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("image table is not a bijection (point {0} repeated)")]
    NotBijection(usize),

    #[error("cycles overlap at point {0}")]
    OverlappingCycles(usize),

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("element is not contained in the group")]
    NotInGroup,

    #[error("map is not compatible with the group: {0}")]
    NotCompatible(String),

    #[error("map is not surjective")]
    NotSurjective,

    #[error("morphism is not an isomorphism")]
    NotIsomorphism,

    #[error("morphisms cannot be composed: {0}")]
    Mismatch(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("not PA: {0}")]
    NotPa(String),

    #[error("retry budget exhausted: {0}")]
    RetryBudget(String),

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u128, cap: usize },

    #[error("group order {order} exceeds enumeration cap {cap}")]
    OrderCap { order: String, cap: u64 },

    #[error("homomorphism is not well defined on the given generators")]
    NotWellDefined,

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
