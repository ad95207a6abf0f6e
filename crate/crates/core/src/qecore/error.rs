use thiserror::Error;

use crate::symexpr::SampleError;
use crate::tensorcalc::TensorError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QeError {
    /// The input does not meet the hypotheses of the requested check.
    #[error("refused: {0}")]
    Refused(String),
    /// The input is degenerate where the check needs it not to be.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Sampling(#[from] SampleError),
}

impl From<crate::symexpr::EvalError> for QeError {
    fn from(e: crate::symexpr::EvalError) -> Self {
        QeError::Tensor(TensorError::Eval(e))
    }
}
