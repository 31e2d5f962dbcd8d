use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("view {view}: dimension mismatch, expected {expected} features, got {got}")]
    ViewDim {
        view: String,
        expected: usize,
        got: usize,
    },

    #[error("data integrity: {0}")]
    Integrity(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("training failed at epoch {epoch}, batch {batch}: {msg}")]
    Training {
        epoch: usize,
        batch: usize,
        msg: String,
    },

    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },

    #[error("model format error: {0}")]
    Format(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Num(#[from] numcore::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
