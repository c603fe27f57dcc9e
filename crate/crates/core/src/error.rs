use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates a mathematical precondition (zero modulus, p not dividing m, even m
    /// where eigenspaces are requested, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input exceeds the supported desk-scale range.
    #[error("{what} = {value} exceeds the supported bound {limit}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// An exact intermediate would not fit in 64 bits.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// Two independent computations that must agree did not.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid input file: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
