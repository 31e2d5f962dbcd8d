//! Turning raw documents into per-view numeric matrices: preprocessing,
//! frequency views, embedding-average views, and precomputed views.
//!
//! All fit operations run on the training split only; test documents are
//! transformed with the frozen vocabulary/idf/embedding tables.

pub mod embedding;
pub mod error;
pub mod precomputed;
pub mod preprocess;
pub mod view;
pub mod vocab;

pub use embedding::{embed_average, EmbeddingTable};
pub use error::{Error, Result};
pub use precomputed::load_precomputed_view;
pub use preprocess::{lemmatize, preprocess, Lexicons, PreprocessOptions, LEXICON_VERSION};
pub use view::{Provenance, ViewMatrix};
pub use vocab::{count_vectorize, tfidf_transform, Vocabulary};
