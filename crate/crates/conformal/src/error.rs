use thiserror::Error;
use wforms_core::CoreError;
use wforms_tensor::TensorError;

#[derive(Debug, Error)]
pub enum ConformalError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("η survives after invariantization in {0} terms")]
    ResidualEta(usize),
    #[error("flat table is not spanned by contraction patterns: {0}")]
    NotInvariant(String),
}
