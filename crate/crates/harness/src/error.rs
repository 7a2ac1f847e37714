use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}:{line}:{column}: {message}")]
    Schema {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Core(#[from] mfc_core::Error),

    #[error("log is empty")]
    EmptyLog,

    #[error("cutoff {cutoff} s lies beyond the last sample at {last} s")]
    CutoffBeyondHorizon { cutoff: f64, last: f64 },
}

pub type Result<T> = std::result::Result<T, HarnessError>;
