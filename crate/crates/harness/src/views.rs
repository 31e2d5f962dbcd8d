//! Corpus-to-views pipeline and its persisted artifacts.
//!
//! Frequency views are fitted on the training split only; all rows (train
//! and test) are then transformed with the frozen vocabulary/idf tables.
//! Artifacts round-trip through a JSON manifest plus one binary matrix
//! file per view, and can featurize unseen text at predict time
//! (precomputed views cannot, by construction).

use crate::error::{Error, Result};
use numcore::Matrix;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use textviews::{
    count_vectorize, embed_average, load_precomputed_view, preprocess, tfidf_transform,
    EmbeddingTable, Lexicons, PreprocessOptions, Provenance, ViewMatrix, Vocabulary,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViewKind {
    Cv,
    Tfidf,
    Embedding { path: PathBuf },
    Precomputed { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: ViewKind,
}

/// Fitted per-view transformer, sufficient for unseen text.
#[derive(Debug, Clone)]
pub enum FittedView {
    Cv,
    Tfidf,
    Embedding { table: EmbeddingTable },
    Precomputed { dim: usize },
}

#[derive(Debug, Clone)]
pub struct BuiltViews {
    pub specs: Vec<ViewSpec>,
    pub views: Vec<ViewMatrix>,
    pub fitted: Vec<FittedView>,
    pub opts: PreprocessOptions,
    /// Shared vocabulary for the frequency views, fitted on training rows.
    pub vocab: Option<Vocabulary>,
}

fn validate_specs(specs: &[ViewSpec]) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::Contract("at least one view must be configured".into()));
    }
    for (i, a) in specs.iter().enumerate() {
        for b in &specs[i + 1..] {
            if a.name == b.name {
                return Err(Error::Contract(format!("duplicate view name {:?}", a.name)));
            }
        }
    }
    Ok(())
}

/// Build every configured view over the full corpus.
pub fn build_views(
    texts: &[String],
    train_idx: &[usize],
    specs: &[ViewSpec],
    opts: &PreprocessOptions,
) -> Result<BuiltViews> {
    validate_specs(specs)?;
    if texts.is_empty() {
        return Err(Error::Integrity("empty corpus".into()));
    }
    let lex = Lexicons::bundled();
    let tokens: Vec<Vec<String>> = texts.iter().map(|t| preprocess(t, opts, lex)).collect();

    let needs_vocab = specs
        .iter()
        .any(|s| matches!(s.kind, ViewKind::Cv | ViewKind::Tfidf));
    let vocab = if needs_vocab {
        let train_tokens: Vec<Vec<String>> =
            train_idx.iter().map(|&i| tokens[i].clone()).collect();
        Some(Vocabulary::fit_with_options(
            &train_tokens,
            opts.remove_hapax,
        )?)
    } else {
        None
    };

    let mut views = Vec::with_capacity(specs.len());
    let mut fitted = Vec::with_capacity(specs.len());
    for spec in specs {
        match &spec.kind {
            ViewKind::Cv => {
                let v = vocab.as_ref().expect("vocab fitted");
                let mut vm = count_vectorize(&tokens, v);
                vm.name = spec.name.clone();
                views.push(vm);
                fitted.push(FittedView::Cv);
            }
            ViewKind::Tfidf => {
                let v = vocab.as_ref().expect("vocab fitted");
                let counts = count_vectorize(&tokens, v);
                let mut vm = tfidf_transform(&counts, v);
                vm.name = spec.name.clone();
                views.push(vm);
                fitted.push(FittedView::Tfidf);
            }
            ViewKind::Embedding { path } => {
                let table = EmbeddingTable::load(path, None)?;
                let rows: Vec<Vec<f64>> = tokens
                    .iter()
                    .map(|doc| embed_average(doc, &table))
                    .collect();
                let m = Matrix::from_rows(&rows)?;
                views.push(ViewMatrix::new(spec.name.clone(), m, Provenance::Fitted));
                fitted.push(FittedView::Embedding { table });
            }
            ViewKind::Precomputed { path } => {
                let mut vm = load_precomputed_view(path, texts.len())?;
                vm.name = spec.name.clone();
                fitted.push(FittedView::Precomputed {
                    dim: vm.feature_dim(),
                });
                views.push(vm);
            }
        }
    }

    Ok(BuiltViews {
        specs: specs.to_vec(),
        views,
        fitted,
        opts: *opts,
        vocab,
    })
}

impl BuiltViews {
    /// Featurize unseen documents with the frozen artifacts, in spec order.
    /// Precomputed views cannot featurize novel text and are an error.
    pub fn transform_texts(&self, texts: &[String]) -> Result<Vec<Matrix>> {
        let lex = Lexicons::bundled();
        let tokens: Vec<Vec<String>> = texts
            .iter()
            .map(|t| preprocess(t, &self.opts, lex))
            .collect();
        let mut out = Vec::with_capacity(self.fitted.len());
        for (spec, fit) in self.specs.iter().zip(&self.fitted) {
            match fit {
                FittedView::Cv => {
                    let v = self.vocab.as_ref().expect("vocab fitted");
                    out.push(count_vectorize(&tokens, v).matrix);
                }
                FittedView::Tfidf => {
                    let v = self.vocab.as_ref().expect("vocab fitted");
                    let counts = count_vectorize(&tokens, v);
                    out.push(tfidf_transform(&counts, v).matrix);
                }
                FittedView::Embedding { table } => {
                    let rows: Vec<Vec<f64>> =
                        tokens.iter().map(|doc| embed_average(doc, table)).collect();
                    out.push(Matrix::from_rows(&rows)?);
                }
                FittedView::Precomputed { .. } => {
                    return Err(Error::Contract(format!(
                        "view {:?} is precomputed: novel text cannot be featurized; \
                         drop it from the configuration or supply computable views",
                        spec.name
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Row-slices of every view, in view order.
    pub fn slice_rows(&self, idx: &[usize]) -> Vec<ViewMatrix> {
        self.views
            .iter()
            .map(|v| ViewMatrix::new(v.name.clone(), v.matrix.select_rows(idx), v.provenance))
            .collect()
    }
}

// --- artifact persistence ---------------------------------------------

const VIEW_MAGIC: &[u8; 4] = b"MVVW";
const MANIFEST_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct PreprocessManifest {
    lowercase: bool,
    strip_urls: bool,
    strip_special: bool,
    remove_stopwords: bool,
    lemmatize: bool,
    remove_hapax: bool,
}

#[derive(Serialize, Deserialize)]
struct VocabManifest {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    num_docs: usize,
}

#[derive(Serialize, Deserialize)]
pub struct Manifest {
    version: u32,
    pub seed: u64,
    pub dataset: String,
    pub corpus_size: usize,
    pub label_names: Vec<String>,
    pub labels: Vec<i64>,
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    preprocess: PreprocessManifest,
    views: Vec<ViewSpec>,
    vocab: Option<VocabManifest>,
}

/// Everything `views build` persists; later stages reload it from disk.
pub struct ViewArtifacts {
    pub built: BuiltViews,
    pub manifest: Manifest,
}

fn write_view_matrix(path: &Path, m: &Matrix) -> Result<()> {
    let mut bytes = VIEW_MAGIC.to_vec();
    bytes.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    bytes.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for &v in m.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_view_matrix(path: &Path) -> Result<Matrix> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let fail = |msg: &str| Error::Integrity(format!("{}: {msg}", path.display()));
    if bytes.len() < 12 || &bytes[..4] != VIEW_MAGIC {
        return Err(fail("not a view matrix file"));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = 12 + rows * cols * 8;
    if bytes.len() != expected {
        return Err(fail("truncated view matrix file"));
    }
    let data = bytes[12..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Matrix::from_vec(rows, cols, data)?)
}

#[allow(clippy::too_many_arguments)]
pub fn save_view_artifacts(
    dir: &Path,
    built: &BuiltViews,
    dataset: &str,
    labels: &[i64],
    label_names: &[String],
    train_idx: &[usize],
    test_idx: &[usize],
    seed: u64,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for v in &built.views {
        write_view_matrix(&dir.join(format!("{}.view", v.name)), &v.matrix)?;
    }
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        seed,
        dataset: dataset.to_string(),
        corpus_size: labels.len(),
        label_names: label_names.to_vec(),
        labels: labels.to_vec(),
        train_idx: train_idx.to_vec(),
        test_idx: test_idx.to_vec(),
        preprocess: PreprocessManifest {
            lowercase: built.opts.lowercase,
            strip_urls: built.opts.strip_urls,
            strip_special: built.opts.strip_special,
            remove_stopwords: built.opts.remove_stopwords,
            lemmatize: built.opts.lemmatize,
            remove_hapax: built.opts.remove_hapax,
        },
        views: built.specs.clone(),
        vocab: built.vocab.as_ref().map(|v| VocabManifest {
            terms: v.terms().to_vec(),
            doc_freq: v.doc_freq().to_vec(),
            num_docs: v.num_docs(),
        }),
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Integrity(format!("manifest serialization: {e}")))?;
    let path = dir.join("manifest.json");
    std::fs::write(&path, json).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_view_artifacts(dir: &Path) -> Result<ViewArtifacts> {
    let manifest_path = dir.join("manifest.json");
    let json = std::fs::read_to_string(&manifest_path).map_err(|source| Error::Io {
        path: manifest_path.display().to_string(),
        source,
    })?;
    let manifest: Manifest = serde_json::from_str(&json).map_err(|e| Error::Integrity(format!(
        "{}: {e}",
        manifest_path.display()
    )))?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::Integrity(format!(
            "manifest version {} unsupported",
            manifest.version
        )));
    }

    let opts = PreprocessOptions {
        lowercase: manifest.preprocess.lowercase,
        strip_urls: manifest.preprocess.strip_urls,
        strip_special: manifest.preprocess.strip_special,
        remove_stopwords: manifest.preprocess.remove_stopwords,
        lemmatize: manifest.preprocess.lemmatize,
        remove_hapax: manifest.preprocess.remove_hapax,
    };
    let vocab = match &manifest.vocab {
        Some(v) => Some(Vocabulary::from_parts(
            v.terms.clone(),
            v.doc_freq.clone(),
            v.num_docs,
        )?),
        None => None,
    };

    let mut views = Vec::new();
    let mut fitted = Vec::new();
    for spec in &manifest.views {
        let m = read_view_matrix(&dir.join(format!("{}.view", spec.name)))?;
        if m.rows() != manifest.corpus_size {
            return Err(Error::Integrity(format!(
                "view {} has {} rows, manifest says {}",
                spec.name,
                m.rows(),
                manifest.corpus_size
            )));
        }
        fitted.push(match &spec.kind {
            ViewKind::Cv => FittedView::Cv,
            ViewKind::Tfidf => FittedView::Tfidf,
            ViewKind::Embedding { path } => FittedView::Embedding {
                table: EmbeddingTable::load(path, Some(m.cols()))?,
            },
            ViewKind::Precomputed { .. } => FittedView::Precomputed { dim: m.cols() },
        });
        views.push(ViewMatrix::new(spec.name.clone(), m, Provenance::Loaded));
    }

    let built = BuiltViews {
        specs: manifest.views.clone(),
        views,
        fitted,
        opts,
        vocab,
    };
    Ok(ViewArtifacts { built, manifest })
}
