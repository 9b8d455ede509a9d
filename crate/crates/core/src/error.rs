use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice size must be at least 1, got {0}")]
    InvalidSize(usize),
    #[error("vertex ({r},{s}) is outside T_{n}")]
    OutOfLattice { r: i32, s: i32, n: usize },
    #[error("side must be 0, 1 or 2, got {0}")]
    InvalidSide(u8),
    #[error("invalid character {0:?} in boundary string")]
    InvalidSymbol(char),
    #[error("boundary sides disagree: {0}")]
    BoundaryMismatch(String),
    #[error("color map is not valid: {0}")]
    InvalidMap(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("size guard exceeded: n = {n} > {guard}")]
    Guard { n: usize, guard: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A state the combinatorics says cannot occur.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}
