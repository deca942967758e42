use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{k} exceeds 2^20")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("operands belong to different fields (q = {0} and q = {1})")]
    MixedFields(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial is not allowed here: {0}")]
    ZeroPolynomial(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
