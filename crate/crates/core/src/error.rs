use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("envelope ansatz requires resonance (omega = {omega}, e_j = {e_j})")]
    NotResonant { omega: f64, e_j: f64 },

    #[error("integration failed at t = {last_good_t}: {reason}")]
    Integration { last_good_t: f64, reason: String },

    #[error("config error (line {line}, key `{key}`): {reason}")]
    Config {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("non-finite value in channel `{channel}` at sample {index}")]
    NonFinite { channel: String, index: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(line: usize, key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            line,
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
