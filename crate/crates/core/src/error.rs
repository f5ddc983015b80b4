use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not p-adically integral")]
    NotIntegral(String),
    #[error("{0} is not a p-adic unit")]
    NotUnit(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("context mismatch")]
    ContextMismatch,
    #[error("level {level} out of range (n_max = {n_max})")]
    LevelOutOfRange { level: u32, n_max: u32 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("word is not in the kernel (x-exponent sum {0})")]
    NotKernel(i64),
    #[error("inconsistent relation set: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
