//! Dataset ingestion. Every loader maps raw labels to dense integers with
//! a recorded name table; LIAR keeps its predefined train/test split (the
//! validation file, when given, joins the training side).

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Fakes,
    Liar2,
    Liar6,
    Isot,
    Custom,
}

impl DatasetKind {
    pub fn from_name(name: &str) -> Option<DatasetKind> {
        match name {
            "fakes" => Some(DatasetKind::Fakes),
            "liar2" => Some(DatasetKind::Liar2),
            "liar6" => Some(DatasetKind::Liar6),
            "isot" => Some(DatasetKind::Isot),
            "custom" => Some(DatasetKind::Custom),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    /// fakes/custom: one CSV. isot: [True.csv, Fake.csv].
    /// liar2/liar6: [train.tsv, test.tsv] or [train.tsv, test.tsv, valid.tsv].
    pub paths: Vec<PathBuf>,
    pub text_column: Option<String>,
    pub label_column: Option<String>,
    /// Name used in report rows.
    pub name: String,
}

#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub texts: Vec<String>,
    pub labels: Vec<i64>,
    /// Dense label -> display name; index is the label value.
    pub label_names: Vec<String>,
    /// (train indices, test indices) when the dataset ships a split.
    pub predefined: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn load_dataset(spec: &DatasetSpec) -> Result<LoadedDataset> {
    match spec.kind {
        DatasetKind::Fakes => load_single_csv(
            spec,
            spec.text_column.as_deref().unwrap_or("article_content"),
            spec.label_column.as_deref().unwrap_or("labels"),
        ),
        DatasetKind::Custom => load_single_csv(
            spec,
            spec.text_column.as_deref().unwrap_or("text"),
            spec.label_column.as_deref().unwrap_or("label"),
        ),
        DatasetKind::Isot => load_isot(spec),
        DatasetKind::Liar2 => load_liar(spec, true),
        DatasetKind::Liar6 => load_liar(spec, false),
    }
}

fn one_path(spec: &DatasetSpec) -> Result<&Path> {
    match spec.paths.as_slice() {
        [p] => Ok(p),
        other => Err(Error::Contract(format!(
            "{} expects exactly one path, got {}",
            spec.name,
            other.len()
        ))),
    }
}

fn open_csv(path: &Path, delimiter: u8, has_headers: bool) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_headers)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path.display().to_string(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            },
            _ => Error::Schema {
                path: path.display().to_string(),
                msg: e.to_string(),
            },
        })
}

fn column_index(path: &Path, headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Schema {
            path: path.display().to_string(),
            msg: format!("missing column {name:?}; found {:?}", headers_vec(headers)),
        })
}

fn headers_vec(headers: &csv::StringRecord) -> Vec<String> {
    headers.iter().map(str::to_string).collect()
}

/// Single CSV with text + label columns; labels become dense integers in
/// sorted order of their raw string values.
fn load_single_csv(spec: &DatasetSpec, text_col: &str, label_col: &str) -> Result<LoadedDataset> {
    let path = one_path(spec)?;
    let mut reader = open_csv(path, b',', true)?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Schema {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?
        .clone();
    let ti = column_index(path, &headers, text_col)?;
    let li = column_index(path, &headers, label_col)?;

    let mut texts = Vec::new();
    let mut raw_labels = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Schema {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        texts.push(rec.get(ti).unwrap_or("").to_string());
        raw_labels.push(rec.get(li).unwrap_or("").trim().to_string());
    }
    if texts.is_empty() {
        return Err(Error::Integrity(format!(
            "{}: no data rows",
            path.display()
        )));
    }

    let names: Vec<String> = raw_labels
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .cloned()
        .collect();
    let labels = raw_labels
        .iter()
        .map(|r| names.iter().position(|n| n == r).unwrap() as i64)
        .collect();
    Ok(LoadedDataset {
        texts,
        labels,
        label_names: names,
        predefined: None,
    })
}

/// ISOT ships one CSV of genuine articles and one of fabricated ones.
fn load_isot(spec: &DatasetSpec) -> Result<LoadedDataset> {
    let [true_path, fake_path] = match spec.paths.as_slice() {
        [a, b] => [a, b],
        other => {
            return Err(Error::Contract(format!(
                "isot expects [True.csv, Fake.csv], got {} paths",
                other.len()
            )))
        }
    };
    let text_col = spec.text_column.as_deref().unwrap_or("text");
    let mut texts = Vec::new();
    let mut labels = Vec::new();
    // label names sorted: fake = 0, real = 1
    for (path, label) in [(fake_path, 0i64), (true_path, 1i64)] {
        let mut reader = open_csv(path, b',', true)?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Schema {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?
            .clone();
        let ti = column_index(path, &headers, text_col)?;
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Schema {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            texts.push(rec.get(ti).unwrap_or("").to_string());
            labels.push(label);
        }
    }
    if texts.is_empty() {
        return Err(Error::Integrity("isot: no data rows".into()));
    }
    Ok(LoadedDataset {
        texts,
        labels,
        label_names: vec!["fake".into(), "real".into()],
        predefined: None,
    })
}

const LIAR_LABELS: [&str; 6] = [
    "barely-true",
    "false",
    "half-true",
    "mostly-true",
    "pants-fire",
    "true",
];
const LIAR_FAKE: [&str; 3] = ["pants-fire", "false", "barely-true"];
const LIAR_LABEL_COL: usize = 1;
const LIAR_TEXT_COL: usize = 2;

/// LIAR: headerless 14-column TSV; label in column 2, statement in
/// column 3; [train, test] or [train, test, valid] files, with valid
/// merged into training.
fn load_liar(spec: &DatasetSpec, binary: bool) -> Result<LoadedDataset> {
    let (train_path, test_path, valid_path) = match spec.paths.as_slice() {
        [tr, te] => (tr, te, None),
        [tr, te, va] => (tr, te, Some(va)),
        other => {
            return Err(Error::Contract(format!(
                "liar expects [train, test] or [train, test, valid], got {} paths",
                other.len()
            )))
        }
    };

    let label_names: Vec<String> = if binary {
        vec!["fake".into(), "real".into()]
    } else {
        LIAR_LABELS.iter().map(|s| s.to_string()).collect()
    };
    let map_label = |raw: &str| -> Result<i64> {
        if binary {
            if LIAR_FAKE.contains(&raw) {
                Ok(0)
            } else if LIAR_LABELS.contains(&raw) {
                Ok(1)
            } else {
                Err(Error::Mapping {
                    value: raw.to_string(),
                    expected: LIAR_LABELS.iter().map(|s| s.to_string()).collect(),
                })
            }
        } else {
            LIAR_LABELS
                .iter()
                .position(|&l| l == raw)
                .map(|i| i as i64)
                .ok_or_else(|| Error::Mapping {
                    value: raw.to_string(),
                    expected: LIAR_LABELS.iter().map(|s| s.to_string()).collect(),
                })
        }
    };

    let mut texts = Vec::new();
    let mut labels = Vec::new();
    let mut load_file = |path: &Path| -> Result<usize> {
        let mut reader = open_csv(path, b'\t', false)?;
        let mut count = 0;
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Schema {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            let raw = rec.get(LIAR_LABEL_COL).unwrap_or("").trim().to_string();
            let text = rec.get(LIAR_TEXT_COL).unwrap_or("").to_string();
            labels.push(map_label(&raw)?);
            texts.push(text);
            count += 1;
        }
        Ok(count)
    };

    let n_train = load_file(train_path)?;
    let n_valid = match valid_path {
        Some(p) => load_file(p)?,
        None => 0,
    };
    let n_test = load_file(test_path)?;
    if texts.is_empty() {
        return Err(Error::Integrity("liar: no data rows".into()));
    }

    let train_idx: Vec<usize> = (0..n_train + n_valid).collect();
    let test_idx: Vec<usize> = (n_train + n_valid..n_train + n_valid + n_test).collect();
    Ok(LoadedDataset {
        texts,
        labels,
        label_names,
        predefined: Some((train_idx, test_idx)),
    })
}
