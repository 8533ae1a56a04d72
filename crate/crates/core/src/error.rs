use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("physicality violation: {0}")]
    Physicality(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported noise mode: {0}")]
    UnsupportedMode(&'static str),

    #[error("channel is not 2-contractive ({count} eigenvalues of unit modulus); the variance has no limit")]
    NoLimit { count: usize },

    #[error("ratio estimate is unstable: denominator {denominator} is within its uncertainty {uncertainty}")]
    UnstableRatio { denominator: f64, uncertainty: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
