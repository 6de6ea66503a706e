use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    /// A record in an input file could not be parsed. `line` is 1-based.
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("{origin}:{line}: invalid BIO tag {tag:?} at token {position}")]
    Bio {
        origin: String,
        line: usize,
        position: usize,
        tag: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sentence {sentence}: {message}")]
    Misaligned { sentence: usize, message: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }
}
