use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid flow system: {0}")]
    InvalidSystem(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("weight is not integral: {0}")]
    NotIntegral(String),
    #[error("point is not regular: {0}")]
    NotRegular(String),
    #[error("point lies outside the cone: {0}")]
    OutsideCone(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid residue form: {0}")]
    InvalidForm(String),
    #[error("form is not homogeneous of the required degree: {0}")]
    Inhomogeneous(String),
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("recurrence cannot be resolved: {0}")]
    Unresolvable(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
