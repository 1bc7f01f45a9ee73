use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Reed-Muller parameters r={r}, m={m}: {reason}")]
    InvalidParams {
        r: u32,
        m: u32,
        reason: &'static str,
    },

    #[error("object index {j} out of range 1..={k}")]
    ObjectOutOfRange { j: usize, k: usize },

    #[error("order {order} out of range 0..={r}")]
    OrderOutOfRange { order: u32, r: u32 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: requested {requested} exceeds the ceiling of {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("point set is not a flat: {0}")]
    NotAFlat(String),

    #[error("flat is not a linear subspace (it does not contain the origin)")]
    NotASubspace,

    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for refusals caused by a size ceiling rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
