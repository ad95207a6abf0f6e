//! Textual metric definition format.
//!
//! ```text
//! # comments run to end of line
//! chart u v x1 x2;
//! param a0 = 1;
//! ppwave_H = a0*(x1^2 + x2^2);
//! potential f = u^2;
//! mu = 0;
//! ```
//!
//! A general metric is given entry by entry with 1-based indices,
//! `metric g[1][1] = -1; g[2][2] = exp(2*t);`, and symmetrized. The
//! `metric` keyword is optional after the first entry.

mod document;
mod error;
mod lexer;
mod parser;
mod resolve;

pub use document::{
    brinkmann_matrix, expression_grammar, parse, parse_expression_in, Chart, Geometry, MetricDocument, PPWAVE_CHART,
};
pub use error::{DslError, DslErrorKind, Pos};
pub use resolve::{MAX_EXPONENT, MAX_EXPONENT_DENOMINATOR};
