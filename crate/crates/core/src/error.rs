use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("form degree {k} out of range for dimension {n}")]
    DegreeOutOfRange { n: usize, k: usize },
    #[error("dimension {0} must be even")]
    OddDimension(usize),
    #[error("dimension {0} outside the supported range")]
    UnsupportedDimension(usize),
    #[error("order {0} must be at least 1")]
    OrderTooSmall(u32),
    #[error("matrix part is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("trace is not in the span of <xi,eta>^2/(|xi|^2|eta|^2) and 1: {0}")]
    TraceNotInSpan(String),
    #[error("unknown invariant pattern {0:?}")]
    UnknownPattern(String),
    #[error("table key (a={a:?}, b={b:?}) violates |a|,|b| >= 1, |a|+|b| = {n}")]
    BadKey { a: Vec<u8>, b: Vec<u8>, n: usize },
    #[error("malformed table: {0}")]
    MalformedTable(String),
}
