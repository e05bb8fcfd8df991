use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rational {num}/{den}: {reason}")]
    InvalidRational { num: u128, den: u128, reason: &'static str },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid digit string: {0}")]
    InvalidDigits(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("{num}/{den} is not a member of the {kind} sequence")]
    NotMember { kind: &'static str, num: u128, den: u128 },

    #[error("need at least {needed} digits, got {available}")]
    TooShort { needed: usize, available: usize },

    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
