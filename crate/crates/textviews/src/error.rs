use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("all terms are hapax legomena; vocabulary would be empty")]
    EmptyVocabulary,

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("embedding table at {path} is empty")]
    EmptyTable { path: String },

    #[error("data integrity: {0}")]
    Integrity(String),

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
