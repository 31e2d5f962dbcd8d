//! Ingestion of precomputed per-document feature files (transformer
//! embeddings produced elsewhere).
//!
//! CSV with header `doc_id,f0,...,f{d-1}`; doc_id is the 0-based row
//! index into dataset order and every id in 0..corpus_size must appear
//! exactly once.

use crate::error::{Error, Result};
use crate::view::{Provenance, ViewMatrix};
use numcore::Matrix;
use std::path::Path;

pub fn load_precomputed_view(path: &Path, corpus_size: usize) -> Result<ViewMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Integrity(format!("{}: {e}", path.display())))?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Integrity(format!("{}: {e}", path.display())))?
        .clone();
    if headers.get(0) != Some("doc_id") {
        return Err(Error::Integrity(format!(
            "{}: first column must be doc_id, found {:?}",
            path.display(),
            headers.get(0).unwrap_or("")
        )));
    }
    let dim = headers.len().saturating_sub(1);
    if dim == 0 {
        return Err(Error::Integrity(format!(
            "{}: no feature columns",
            path.display()
        )));
    }

    let mut matrix = Matrix::zeros(corpus_size, dim);
    let mut seen = vec![false; corpus_size];
    let mut duplicates = Vec::new();
    let mut row_count = 0usize;

    for (recno, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Integrity(format!("{}: {e}", path.display())))?;
        let line = recno + 2; // header is line 1
        let id: usize = record
            .get(0)
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line,
                msg: format!("bad doc_id {:?}", record.get(0).unwrap_or("")),
            })?;
        if record.len() != dim + 1 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line,
                msg: format!("expected {} fields, found {}", dim + 1, record.len()),
            });
        }
        if id >= corpus_size {
            return Err(Error::Integrity(format!(
                "{}: doc_id {id} out of range for corpus size {corpus_size}",
                path.display()
            )));
        }
        if seen[id] {
            duplicates.push(id);
        }
        seen[id] = true;
        for j in 0..dim {
            let v: f64 = record
                .get(j + 1)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| Error::Parse {
                    path: path.display().to_string(),
                    line,
                    msg: format!("unreadable float {:?}", record.get(j + 1).unwrap_or("")),
                })?;
            matrix.set(id, j, v);
        }
        row_count += 1;
    }

    if !duplicates.is_empty() {
        duplicates.sort_unstable();
        duplicates.dedup();
        return Err(Error::Integrity(format!(
            "{}: duplicate doc_ids {:?}",
            path.display(),
            duplicates
        )));
    }
    let missing: Vec<usize> = (0..corpus_size).filter(|&i| !seen[i]).collect();
    if !missing.is_empty() {
        return Err(Error::Integrity(format!(
            "{}: missing doc_ids {:?} ({} rows for corpus size {})",
            path.display(),
            missing,
            row_count,
            corpus_size
        )));
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "precomputed".to_string());
    Ok(ViewMatrix::new(name, matrix, Provenance::Loaded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_doc_file_loads_in_id_order() {
        let f = write_tmp("doc_id,f0,f1\n2,5.0,6.0\n0,1.0,2.0\n1,3.0,4.0\n");
        let v = load_precomputed_view(f.path(), 3).unwrap();
        assert_eq!(v.docs(), 3);
        assert_eq!(v.feature_dim(), 2);
        assert_eq!(v.matrix.row(0), &[1.0, 2.0]);
        assert_eq!(v.matrix.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn duplicate_ids_error_lists_them() {
        let f = write_tmp("doc_id,f0\n0,1.0\n0,2.0\n2,3.0\n");
        let err = load_precomputed_view(f.path(), 3).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        assert!(err.to_string().contains('0'), "{err}");
    }

    #[test]
    fn missing_ids_error_lists_them() {
        let f = write_tmp("doc_id,f0\n0,1.0\n1,2.0\n");
        let err = load_precomputed_view(f.path(), 3).unwrap_err();
        assert!(err.to_string().contains("missing"), "{err}");
        assert!(err.to_string().contains('2'), "{err}");
    }
}
