use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("malformed cell at row {row}, column {column}: {message}")]
    Cell { row: usize, column: usize, message: String },

    #[error("call matrix is not square: {rows} rows for {columns} columns")]
    NonSquare { rows: usize, columns: usize },

    #[error("duplicate class name `{0}`")]
    DuplicateClass(String),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("no classes in input")]
    NoClasses,

    #[error("call matrix and token corpus share no class names")]
    DisjointProject,

    #[error("service `{0}` is empty")]
    EmptyService(String),

    #[error("duplicate service name `{0}`")]
    DuplicateService(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("bandwidth estimate needs at least two distinct points")]
    DegenerateBandwidth,

    #[error("empty input")]
    EmptyInput,

    #[error("all points classified as noise")]
    AllNoise,

    #[error("{0}")]
    Incompatible(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
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
