use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field of order {0}^{1} is outside the supported range")]
    FieldTooLarge(u64, u32),
    #[error("modulus is not irreducible of degree {0}")]
    Reducible(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("no embedding: {0}")]
    NoEmbedding(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division is not exact")]
    InexactDivision,
    #[error("{0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("ramification filtration has more than one jump: {0}")]
    MultipleJumps(String),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
