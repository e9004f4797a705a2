use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed field: {0}")]
    MalformedField(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The numerical solution left every bounded set at `time`.
    #[error("blow-up at t = {time}")]
    BlowUp { time: f64 },

    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("inconsistent data: {0}")]
    Inconsistency(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
