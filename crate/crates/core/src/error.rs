use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus must be odd and at least 3, got {0}")]
    BadModulus(i64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("{q} is not a unit modulo {d}")]
    NotAUnit { q: i64, d: u64 },
    #[error("Im(τ) must be positive, got {0}")]
    NotInUpperHalfPlane(f64),
    #[error("theta series needs {needed} terms, cap is {cap}")]
    Truncation { needed: usize, cap: usize },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
