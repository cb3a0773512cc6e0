use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network layout: {0}")]
    InvalidLayout(String),

    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    Shape {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("non-finite gradient in layer {layer} ({what})")]
    NonFiniteGradient { layer: usize, what: &'static str },

    #[error("non-finite {what} for agent {agent}")]
    NonFiniteLoss { agent: usize, what: &'static str },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("expected {expected} agents, got {actual}")]
    AgentCount { expected: usize, actual: usize },

    #[error("replay buffer holds {available} transitions, batch needs {requested}")]
    BufferTooSmall { available: usize, requested: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
