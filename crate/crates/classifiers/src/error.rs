use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("data integrity: {0}")]
    Integrity(String),

    #[error("feature dimension mismatch: model expects {expected}, got {got}")]
    FeatureDim { expected: usize, got: usize },

    #[error("classifier format error: {0}")]
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
