use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input violated a documented precondition or invariant.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A comb CSV file failed to parse at a specific line.
    #[error("comb csv line {line}: {message}")]
    Csv { line: u64, message: String },

    /// A root search failed to bracket or the curve was not monotone.
    #[error("solver: {0}")]
    Solver(String),

    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
