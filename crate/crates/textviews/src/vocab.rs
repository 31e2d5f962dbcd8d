//! Vocabulary fitting and the frequency views built on it.

use crate::error::{Error, Result};
use crate::view::{Provenance, ViewMatrix};
use numcore::Matrix;
use std::collections::HashMap;

/// Term list fitted on a training corpus. Ordering is descending document
/// frequency with lexicographic tie-breaks, so it is identical across
/// runs and platforms.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    num_docs: usize,
}

impl Vocabulary {
    /// Fit on tokenized documents, dropping hapax terms (total corpus
    /// occurrence count of one; a term used twice in a single document
    /// is kept).
    pub fn fit(corpus: &[Vec<String>]) -> Result<Vocabulary> {
        Vocabulary::fit_with_options(corpus, true)
    }

    pub fn fit_with_options(corpus: &[Vec<String>], remove_hapax: bool) -> Result<Vocabulary> {
        let mut total: HashMap<&str, usize> = HashMap::new();
        let mut df: HashMap<&str, usize> = HashMap::new();
        for doc in corpus {
            let mut seen: Vec<&str> = Vec::new();
            for tok in doc {
                *total.entry(tok).or_insert(0) += 1;
                if !seen.contains(&tok.as_str()) {
                    seen.push(tok);
                }
            }
            for tok in seen {
                *df.entry(tok).or_insert(0) += 1;
            }
        }

        let mut entries: Vec<(&str, usize)> = total
            .iter()
            .filter(|(_, &count)| !remove_hapax || count > 1)
            .map(|(&t, _)| (t, df[t]))
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

        let terms: Vec<String> = entries.iter().map(|(t, _)| t.to_string()).collect();
        let doc_freq: Vec<usize> = entries.iter().map(|(_, d)| *d).collect();
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            terms,
            index,
            doc_freq,
            num_docs: corpus.len(),
        })
    }

    /// Rebuild from persisted parts (artifact loading).
    pub fn from_parts(terms: Vec<String>, doc_freq: Vec<usize>, num_docs: usize) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::Integrity(format!(
                "vocabulary parts disagree: {} terms vs {} doc frequencies",
                terms.len(),
                doc_freq.len()
            )));
        }
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            terms,
            index,
            doc_freq,
            num_docs,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Smoothed inverse document frequency: ln((1+N)/(1+df)) + 1.
    pub fn idf(&self, term_idx: usize) -> f64 {
        let n = self.num_docs as f64;
        let df = self.doc_freq[term_idx] as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    }
}

/// Entry (i, j) = occurrences of term j in document i; out-of-vocabulary
/// tokens are ignored.
pub fn count_vectorize(corpus: &[Vec<String>], vocab: &Vocabulary) -> ViewMatrix {
    let mut m = Matrix::zeros(corpus.len(), vocab.len());
    for (i, doc) in corpus.iter().enumerate() {
        for tok in doc {
            if let Some(j) = vocab.index_of(tok) {
                m.set(i, j, m.get(i, j) + 1.0);
            }
        }
    }
    ViewMatrix::new("cv", m, Provenance::Fitted)
}

/// Smoothed tf-idf with L2 row normalization; zero count rows stay zero.
pub fn tfidf_transform(counts: &ViewMatrix, vocab: &Vocabulary) -> ViewMatrix {
    let src = &counts.matrix;
    let mut m = Matrix::zeros(src.rows(), src.cols());
    for i in 0..src.rows() {
        let mut norm_sq = 0.0;
        for j in 0..src.cols() {
            let v = src.get(i, j) * vocab.idf(j);
            m.set(i, j, v);
            norm_sq += v * v;
        }
        if norm_sq > 0.0 {
            let inv = 1.0 / norm_sq.sqrt();
            for j in 0..src.cols() {
                m.set(i, j, m.get(i, j) * inv);
            }
        }
    }
    ViewMatrix::new("tfidf", m, Provenance::Fitted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(parts: &[&[&str]]) -> Vec<Vec<String>> {
        parts
            .iter()
            .map(|d| d.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn hapax_by_total_count() {
        let v = Vocabulary::fit(&docs(&[&["a", "b"], &["a"]])).unwrap();
        assert_eq!(v.terms(), &["a".to_string()]);

        // twice inside one doc counts as two corpus occurrences
        let v = Vocabulary::fit(&docs(&[&["a", "a"]])).unwrap();
        assert_eq!(v.terms(), &["a".to_string()]);
    }

    #[test]
    fn all_hapax_is_an_error() {
        let err = Vocabulary::fit(&docs(&[&["x"], &["y"]])).unwrap_err();
        assert!(matches!(err, Error::EmptyVocabulary));
    }

    #[test]
    fn ordering_is_df_desc_then_lexicographic() {
        let v = Vocabulary::fit(&docs(&[
            &["b", "c", "c"],
            &["b", "a", "a"],
            &["b"],
        ]))
        .unwrap();
        // df: b=3, a=1, c=1 -> b first, then a/c lexicographic
        assert_eq!(v.terms(), &["b".to_string(), "a".to_string(), "c".to_string()]);
    }

    #[test]
    fn count_vectorize_examples() {
        let corpus = docs(&[&["a", "a", "b"], &["z"], &[]]);
        let v = Vocabulary::fit(&docs(&[&["a", "b"], &["a", "b"]])).unwrap();
        let cv = count_vectorize(&corpus, &v);
        assert_eq!(cv.matrix.row(0), &[2.0, 1.0]);
        assert_eq!(cv.matrix.row(1), &[0.0, 0.0]); // unseen token ignored
        assert_eq!(cv.matrix.row(2), &[0.0, 0.0]); // empty doc -> zero row
    }

    #[test]
    fn tfidf_term_in_every_doc_has_idf_one() {
        let corpus = docs(&[&["a", "b"], &["a"]]);
        let v = Vocabulary::fit_with_options(&corpus, false).unwrap();
        let a = v.index_of("a").unwrap();
        assert!((v.idf(a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tfidf_hand_computed_two_doc_matrix() {
        // docs: ["a","b"], ["a"]; vocab {a, b}; N=2, df_a=2, df_b=1
        let corpus = docs(&[&["a", "b"], &["a"]]);
        let v = Vocabulary::fit_with_options(&corpus, false).unwrap();
        let counts = count_vectorize(&corpus, &v);
        let t = tfidf_transform(&counts, &v);

        let idf_a = (3.0f64 / 3.0).ln() + 1.0;
        let idf_b = (3.0f64 / 2.0).ln() + 1.0;
        let norm = (idf_a * idf_a + idf_b * idf_b).sqrt();
        let a = v.index_of("a").unwrap();
        let b = v.index_of("b").unwrap();
        assert!((t.matrix.get(0, a) - idf_a / norm).abs() < 1e-9);
        assert!((t.matrix.get(0, b) - idf_b / norm).abs() < 1e-9);
        assert!((t.matrix.get(1, a) - 1.0).abs() < 1e-9);
        assert!((t.matrix.get(1, b) - 0.0).abs() < 1e-9);
    }

    #[test]
    fn tfidf_zero_rows_stay_zero() {
        let corpus = docs(&[&["a", "a"], &[]]);
        let v = Vocabulary::fit(&corpus).unwrap();
        let t = tfidf_transform(&count_vectorize(&corpus, &v), &v);
        assert_eq!(t.matrix.row(1), &[0.0]);
    }
}
