use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("d must be prime (got {0})")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{what}: {count} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        count: String,
        cap: u64,
    },

    #[error("vector is not in the span of the given basis")]
    NotInSpan,

    #[error("subspace is not contained in the Lagrangian")]
    NotContained,

    #[error("subspace is not Lagrangian")]
    NotLagrangian,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn cap(what: &'static str, count: impl ToString, cap: u64) -> Self {
        Error::CapExceeded {
            what,
            count: count.to_string(),
            cap,
        }
    }
}
