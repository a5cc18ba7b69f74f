use std::fmt;

use crate::bicomplex::Bidegree;

/// A parse failure with a 1-based line/column position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    /// Locate byte offset `pos` of `src`.
    pub fn at(src: &str, pos: usize, message: impl Into<String>) -> Self {
        let pos = pos.min(src.len());
        let before = &src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("malformed shape: {0}")]
    MalformedShape(String),
    #[error("invalid bicomplex: {0}")]
    InvalidBicomplex(String),
    #[error("decomposition failure: {0}")]
    DecompositionFailure(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("undefined Massey product: {0}")]
    UndefinedProduct(String),
    #[error("bidegree mismatch: expected {expected:?}, found {found:?}")]
    BidegreeMismatch { expected: Bidegree, found: Bidegree },
    #[error("unknown generator label {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
