use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants are grouped the way the command-line front end reports them:
/// malformed input and parse failures, resource limits, and internal
/// consistency failures (a computed object violating a proven identity).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("unknown builtin statistic `{0}`")]
    UnknownBuiltin(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate evaluation: {0}")]
    DegenerateEvaluation(String),

    #[error("limit diverges: {0}")]
    Divergence(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}
