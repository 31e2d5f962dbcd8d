//! Pretrained word-embedding tables and mean-pooled document vectors.
//!
//! File grammar, bit-exact: one entry per line, `token v1 ... vd`,
//! fields separated by single spaces, LF line endings with optional CR.

use crate::error::{Error, Result};
use numcore::Matrix;
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    index: HashMap<String, usize>,
    vectors: Matrix,
    dim: usize,
}

impl EmbeddingTable {
    pub fn load(path: &Path, expected_dim: Option<usize>) -> Result<EmbeddingTable> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        EmbeddingTable::parse(&text, expected_dim, &path.display().to_string())
    }

    pub fn parse(text: &str, expected_dim: Option<usize>, path: &str) -> Result<EmbeddingTable> {
        let mut dim = expected_dim;
        let mut index = HashMap::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            let token = fields.next().unwrap_or_default();
            let mut vec = Vec::new();
            for f in fields {
                let v: f64 = f.parse().map_err(|_| Error::Parse {
                    path: path.to_string(),
                    line: lineno + 1,
                    msg: format!("unreadable float {f:?}"),
                })?;
                vec.push(v);
            }
            match dim {
                None => dim = Some(vec.len()),
                Some(d) if d != vec.len() => {
                    return Err(Error::Parse {
                        path: path.to_string(),
                        line: lineno + 1,
                        msg: format!("dimension {} conflicts with {}", vec.len(), d),
                    });
                }
                _ => {}
            }
            // duplicate tokens: first occurrence wins
            if !index.contains_key(token) {
                index.insert(token.to_string(), rows.len());
                rows.push(vec);
            }
        }

        if rows.is_empty() {
            return Err(Error::EmptyTable {
                path: path.to_string(),
            });
        }
        let dim = dim.unwrap();
        let vectors = Matrix::from_rows(&rows)?;
        Ok(EmbeddingTable {
            index,
            vectors,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn lookup(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.vectors.row(i))
    }
}

/// Arithmetic mean of the vectors of in-table tokens; the zero vector for
/// empty or all-OOV input.
pub fn embed_average(tokens: &[String], table: &EmbeddingTable) -> Vec<f64> {
    let mut acc = vec![0.0; table.dim()];
    let mut n = 0usize;
    for tok in tokens {
        if let Some(row) = table.lookup(tok) {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
            n += 1;
        }
    }
    if n > 0 {
        let inv = 1.0 / n as f64;
        for a in &mut acc {
            *a *= inv;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_two_entries() {
        let t = EmbeddingTable::parse("a 1.0 2.0\nb 3.0 4.0", None, "mem").unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.len(), 2);
        assert_eq!(t.lookup("a").unwrap(), &[1.0, 2.0]);
    }

    #[test]
    fn dimension_conflict_reports_line() {
        let err = EmbeddingTable::parse("a 1.0 2.0 3.0\nb 1.0 2.0", None, "mem").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unreadable_float_reports_line() {
        let err = EmbeddingTable::parse("a 1.0 x", None, "mem").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(
            EmbeddingTable::parse("", None, "mem"),
            Err(Error::EmptyTable { .. })
        ));
    }

    #[test]
    fn duplicate_token_first_wins() {
        let t = EmbeddingTable::parse("a 1.0\na 9.0", None, "mem").unwrap();
        assert_eq!(t.lookup("a").unwrap(), &[1.0]);
    }

    #[test]
    fn crlf_accepted() {
        let t = EmbeddingTable::parse("a 1.0 2.0\r\nb 3.0 4.0\r\n", None, "mem").unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn average_examples() {
        let t = EmbeddingTable::parse("p 1.0 3.0\nq 3.0 5.0", None, "mem").unwrap();
        assert_eq!(embed_average(&toks(&[]), &t), vec![0.0, 0.0]);
        assert_eq!(embed_average(&toks(&["p"]), &t), vec![1.0, 3.0]);
        assert_eq!(embed_average(&toks(&["p", "q"]), &t), vec![2.0, 4.0]);
        assert_eq!(embed_average(&toks(&["zz"]), &t), vec![0.0, 0.0]);
    }
}
