use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot open {path}: {source}")]
    Open {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("degenerate label set: training needs at least two classes, got {0}")]
    DegenerateLabels(usize),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("empty document")]
    EmptyDocument,

    #[error("invalid model file: {0}")]
    ModelFormat(String),

    #[error("invalid ARPA file at line {line}: {message}")]
    Arpa { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
