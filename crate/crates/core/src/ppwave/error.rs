use thiserror::Error;

use crate::qecore::QeError;
use crate::symexpr::{EvalError, SampleError};
use crate::tensorcalc::TensorError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PpWaveError {
    #[error("the profile H must not depend on v")]
    DependsOnV,
    #[error("the profile mentions `{0}`, which is not one of u, x1, x2")]
    ForeignSymbol(String),
    #[error("expected a function of u alone, got {0}")]
    NotFunctionOfU(String),
    #[error("invalid ODE setup: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Sampling(#[from] SampleError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
