use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DslErrorKind {
    Syntax,
    UnknownIdentifier,
    DimensionMismatch,
    Conflict,
    Invalid,
}

/// Parse or resolution failure with the position of the offending token.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct DslError {
    pub kind: DslErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl DslError {
    pub(crate) fn new(kind: DslErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        DslError { kind, pos, message: message.into() }
    }

    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(DslErrorKind::Syntax, pos, message)
    }
}
