use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a state must contain at least one qubit")]
    EmptyState,
    #[error("amplitude pair {index} is not normalized (|a0|^2 + |a1|^2 = {norm})")]
    NonNormalizedInput { index: usize, norm: f64 },
    #[error("entropy {value} at position {index} lies outside [0, 1]")]
    EntropyOutOfRange { index: usize, value: f64 },
    #[error("subset has {blocks} contiguous blocks inside one entangled segment (cap {cap})")]
    BlockCapExceeded { blocks: usize, cap: usize },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("instance has {n} items, limit is {limit}")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error("state is not a product state (max bond dimension {chi})")]
    NotSeparable { chi: usize },
    #[error("weight function is not per-qubit additive")]
    NotAdditiveWeight,
    #[error("dynamic-programming table needs {cells} cells, limit is {limit}")]
    TableTooLarge { cells: u128, limit: u128 },
    #[error("epsilon {0} must satisfy 0 <= epsilon < 1/2")]
    EpsilonTooLarge(String),
    #[error("target exceeds the normalized size bound |A| = {0}")]
    TargetExceedsSetSize(usize),
    #[error("reduction window too narrow: {0}")]
    WindowTooNarrow(String),
    #[error("file is {bytes} bytes, limit is {limit}")]
    FileTooLarge { bytes: u64, limit: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
