use std::fmt;

use thiserror::Error;

/// Byte range into the source text, with the 1-based line and column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("syntax error at {span}: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("unknown symbol `{name}` at {span}")]
    UnknownSymbol { span: Span, name: String },
    #[error("evaluation error at {path}: {source}")]
    Eval {
        path: String,
        #[source]
        source: qrucible_core::Error,
    },
    #[error("type error at {path}: {msg}")]
    Type { path: String, msg: String },
}

impl DslError {
    pub fn syntax(span: Span, msg: impl Into<String>) -> Self {
        DslError::Syntax { span, msg: msg.into() }
    }

    /// The core error behind an evaluation failure, if any.
    pub fn core(&self) -> Option<&qrucible_core::Error> {
        match self {
            DslError::Eval { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T, E = DslError> = std::result::Result<T, E>;
