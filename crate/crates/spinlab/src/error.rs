use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("odd number of half-edges ({0}) admits no perfect matching")]
    OddHalfEdges(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not even: vertex {0} has odd degree")]
    NotEven(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("exact mode refuses {what}: {value} exceeds cap {cap}; use Monte Carlo instead")]
    DegreeCap {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("matrix {0} is not positive semidefinite")]
    NotPsd(usize),
    #[error("sum of ensemble matrices is not positive definite")]
    SumNotPd,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("interval precision cap {0} bits reached without a certified sign")]
    PrecisionCap(u32),
    #[error("square root of an interval containing negative values")]
    NegativeSqrt,
    #[error("{0} must be strictly positive")]
    NotStrictlyPositive(&'static str),
    #[error("need at least one sample")]
    NoSamples,
    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
