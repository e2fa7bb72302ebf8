use thiserror::Error;

/// Errors produced by the library.
///
/// `Internal` marks a violated theorem guarantee and always indicates a bug
/// in this crate, never bad user input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("graph parse error at line {line}: {msg}")]
    GraphParse { line: usize, msg: String },

    #[error("word parse error at token {index}: {msg}")]
    WordParse { index: usize, msg: String },

    #[error("elements belong to different defining graphs")]
    MixedGraphs,

    #[error("element is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
