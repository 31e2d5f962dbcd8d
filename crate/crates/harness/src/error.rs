use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error in {path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("label mapping error: unmapped value {value:?} (expected one of {expected:?})")]
    Mapping { value: String, expected: Vec<String> },

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("data integrity: {0}")]
    Integrity(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Text(#[from] textviews::Error),

    #[error(transparent)]
    Mvae(#[from] mvae::Error),

    #[error(transparent)]
    Classifier(#[from] classifiers::Error),

    #[error(transparent)]
    Num(#[from] numcore::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
