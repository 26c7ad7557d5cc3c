use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty set has no classification")]
    EmptySet,
    #[error("ratio undefined: |A-A| = {0} < 2")]
    RatioUndefined(usize),
    #[error("expansion base {base} below carry-free threshold {threshold}")]
    BaseTooSmall { base: u64, threshold: u64 },
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("formula proved only for k >= 2 (got k = {0})")]
    FormulaRange(u64),
    #[error("unknown named set {0:?}")]
    UnknownName(String),
    #[error("diameter {0} outside supported search range [2, 40]")]
    DiameterOutOfRange(u32),
    #[error("fringe pair needs n >= 81 (got {0})")]
    FringeTooShort(u64),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
