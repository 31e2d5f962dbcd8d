//! Experiment records and their CSV form.
//!
//! CSV columns, in this exact order: dataset, ae_model, latent_dim,
//! classifier, views, seed, accuracy, f1_macro, train_time_s, status,
//! error. Failed cells keep their row with empty metric fields.

use crate::error::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Ok,
    Failed,
}

impl RecordStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordStatus::Ok => "ok",
            RecordStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub dataset: String,
    /// Autoencoder kind name, or "none" for single-view baselines.
    pub ae_model: String,
    pub latent_dim: usize,
    pub classifier: String,
    pub views: Vec<String>,
    pub seed: u64,
    pub accuracy: Option<f64>,
    pub f1_macro: Option<f64>,
    pub train_time_s: f64,
    pub status: RecordStatus,
    pub error: String,
    /// Digest of the loss history of the autoencoder behind this record.
    pub loss_digest: String,
    /// Digest of the serialized autoencoder behind this record.
    pub model_digest: String,
    /// Combos study only: strictly better macro-F than the all-views run.
    pub better_than_all: Option<bool>,
}

impl ExperimentRecord {
    pub fn views_field(&self) -> String {
        self.views.join("+")
    }

    /// Everything that must reproduce bit-for-bit across reruns and worker
    /// counts; wall-clock time is excluded.
    pub fn determinism_key(&self) -> (String, String, usize, String, String, u64, String, String) {
        (
            self.dataset.clone(),
            self.ae_model.clone(),
            self.latent_dim,
            self.classifier.clone(),
            self.views_field(),
            self.seed,
            format!("{:?}:{:?}", self.accuracy, self.f1_macro),
            format!("{}:{}", self.status.as_str(), self.error),
        )
    }
}

pub const CSV_COLUMNS: [&str; 11] = [
    "dataset",
    "ae_model",
    "latent_dim",
    "classifier",
    "views",
    "seed",
    "accuracy",
    "f1_macro",
    "train_time_s",
    "status",
    "error",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

pub fn write_records(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: std::io::Error::other(e.to_string()),
    })?;
    w.write_record(CSV_COLUMNS)
        .map_err(|e| Error::Integrity(e.to_string()))?;
    for r in records {
        w.write_record([
            r.dataset.as_str(),
            r.ae_model.as_str(),
            &r.latent_dim.to_string(),
            r.classifier.as_str(),
            &r.views_field(),
            &r.seed.to_string(),
            &fmt_opt(r.accuracy),
            &fmt_opt(r.f1_macro),
            &format!("{:.3}", r.train_time_s),
            r.status.as_str(),
            r.error.as_str(),
        ])
        .map_err(|e| Error::Integrity(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Integrity(e.to_string()))?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: std::io::Error::other(e.to_string()),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Integrity(e.to_string()))?
        .clone();
    let expected: Vec<&str> = CSV_COLUMNS.to_vec();
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(Error::Integrity(format!(
            "record file {} has columns {found:?}, expected {expected:?}",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Integrity(e.to_string()))?;
        let get = |i: usize| rec.get(i).unwrap_or("").to_string();
        let parse_opt = |s: String| -> Option<f64> {
            if s.is_empty() {
                None
            } else {
                s.parse().ok()
            }
        };
        out.push(ExperimentRecord {
            dataset: get(0),
            ae_model: get(1),
            latent_dim: get(2).parse().unwrap_or(0),
            classifier: get(3),
            views: get(4).split('+').map(str::to_string).collect(),
            seed: get(5).parse().unwrap_or(0),
            accuracy: parse_opt(get(6)),
            f1_macro: parse_opt(get(7)),
            train_time_s: get(8).parse().unwrap_or(0.0),
            status: if get(9) == "ok" {
                RecordStatus::Ok
            } else {
                RecordStatus::Failed
            },
            error: get(10),
            loss_digest: String::new(),
            model_digest: String::new(),
            better_than_all: None,
        });
    }
    Ok(out)
}
