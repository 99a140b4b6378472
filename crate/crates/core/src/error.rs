use thiserror::Error;

/// Errors raised while building or combining kernels, systems and programs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("system mismatch: {0}")]
    SystemMismatch(String),

    #[error("depth {requested} exceeds declared depth {available}")]
    DepthExceeded { requested: usize, available: usize },

    #[error("lexical error at {pos}: {msg}")]
    Lex { pos: usize, msg: String },

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown name `{name}` at {pos}")]
    UnknownName { name: String, pos: usize },

    #[error("type mismatch at {pos}: {msg}")]
    TypeMismatch { pos: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    /// True for errors produced while reading program text.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Lex { .. }
                | Error::Syntax { .. }
                | Error::UnknownName { .. }
                | Error::TypeMismatch { .. }
                | Error::Format(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
