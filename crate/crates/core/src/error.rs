use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("no records")]
    NoRecords,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("empty angular profile: no occupied bins")]
    EmptyProfile,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("unknown model '{0}'")]
    UnknownModel(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable category, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::NoRecords => "no_records",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Config(_) => "config",
            Error::EmptyProfile => "empty_profile",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Degenerate(_) => "degenerate",
            Error::UnknownModel(_) => "unknown_model",
            Error::Serialization(_) => "serialization",
        }
    }
}
