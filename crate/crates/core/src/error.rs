use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An input matrix, state, channel or measurement violates its defining constraints.
    #[error("validation error: {0}")]
    Validation(String),
    /// The request is well-formed but cannot be satisfied (e.g. no channel exists).
    #[error("infeasible request: {0}")]
    Infeasible(String),
    /// The operation is not defined for the given channel class.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A JSON document does not match the documented schema.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
