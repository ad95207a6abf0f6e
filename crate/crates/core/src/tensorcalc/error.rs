use thiserror::Error;

use crate::symexpr::{EvalError, SampleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("singular metric: {0}")]
    Singular(String),
    #[error("{op} is only implemented in dimension 4 (got {dim})")]
    UnsupportedDimension { op: &'static str, dim: usize },
    #[error("declared symmetry does not hold: {0}")]
    SymmetryViolation(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("metric cannot be evaluated at the sample point: {0}")]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sampling(#[from] SampleError),
}
