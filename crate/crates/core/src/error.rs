use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDist(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("strategy for box {index} is not a mean-preserving contraction of its prior (violation {violation:.3e})")]
    NotMpc { index: usize, violation: f64 },

    #[error("unknown case id `{0}`")]
    UnknownCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
