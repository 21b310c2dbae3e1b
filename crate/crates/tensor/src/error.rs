use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed index structure: {0}")]
    Malformed(String),
    #[error("derivative position {position} out of range for a factor with {len} derivatives")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("factor index {0} out of range")]
    FactorOutOfRange(usize),
    #[error("jet order {have} too small, need {need}")]
    InsufficientJet { have: usize, need: usize },
    #[error("unknown head {0:?}")]
    UnknownHead(String),
    #[error("expression is not a scalar: free labels {0:?}")]
    NotScalar(Vec<u16>),
}
