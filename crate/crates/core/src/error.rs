use num_bigint::BigInt;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank-deficient input: expected rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("factorization incomplete: unfactored cofactors {remaining:?}")]
    Factor {
        partial: Vec<(BigInt, u32)>,
        remaining: Vec<BigInt>,
    },

    #[error("polynomial does not satisfy the Weil functional equation: {0}")]
    NotWeilShape(String),

    #[error("invalid Weil input: {0}")]
    InvalidWeil(String),

    #[error("unsupported degree {0} (at most 4)")]
    UnsupportedDegree(usize),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("search exhausted at limit {0}")]
    SearchLimit(u64),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
