use thiserror::Error;

/// A lexical or grammatical error at a source position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Errors produced while turning program or type text into checked syntax.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{col}: recursive type `{binder}` is not contractive")]
    Contractivity {
        line: usize,
        col: usize,
        binder: String,
    },
    #[error("{line}:{col}: unbound type variable `{name}`")]
    UnboundTypeVariable {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: invalid interface: {message}")]
    Interface {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: invalid typecase type: {message}")]
    TestType {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: typecase on a type equivalent to {which} (use --allow-trivial-case)")]
    TrivialTest {
        line: usize,
        col: usize,
        which: &'static str,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax(e) => (e.line, e.col),
            ParseError::Contractivity { line, col, .. }
            | ParseError::UnboundTypeVariable { line, col, .. }
            | ParseError::Interface { line, col, .. }
            | ParseError::TestType { line, col, .. }
            | ParseError::TrivialTest { line, col, .. } => (*line, *col),
        }
    }
}

/// A recursive equation system in which some cycle avoids every constructor.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("equation for `{binder}` is not contractive")]
pub struct ContractivityError {
    pub binder: String,
}
