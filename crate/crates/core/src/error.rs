use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivnetError {
    #[error("network size must be at least {min}, got {got}")]
    SizeTooSmall { min: u64, got: u64 },

    #[error("node {n} is outside 1..={limit}")]
    NodeOutOfRange { n: u64, limit: u64 },

    #[error("division by zero")]
    ZeroDivisor,

    #[error("nodes {n} and {next} lie in different floor bands of G_{size}")]
    CrossBand { n: u64, next: u64, size: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid fit input: {0}")]
    InvalidFit(String),

    #[error("empty profile")]
    EmptyProfile,

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, DivnetError>;
