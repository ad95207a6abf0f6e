//! Symbolic expressions over chart coordinates with exact rational
//! coefficients.
//!
//! Expressions are immutable and canonical at construction: sums and
//! products are flattened, like terms collected, constants folded, and
//! products distributed over sums. Transcendental functions are opaque
//! nodes that only know their derivative rules.

mod calculus;
mod display;
mod eval;
mod expr;
mod zero;

pub use calculus::{antiderivative_polynomial, differentiate, differentiate_n, simplify};
pub use eval::{evaluate, EvalError, NumericPoint};
pub use expr::{Exponent, Expr, ExprView, Func, Symbol};
pub use zero::{is_zero, SampleError, ZeroStatus, ZeroTest, ZeroVerdict, DEFAULT_SEED};

#[cfg(test)]
mod tests;
